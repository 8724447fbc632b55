#ifndef POLARFUSE_POLARFUSE_HPP
#define POLARFUSE_POLARFUSE_HPP

#include "polarfuse/eigenspace.hpp"
#include "polarfuse/error.hpp"
#include "polarfuse/fusion.hpp"
#include "polarfuse/image.hpp"
#include "polarfuse/jacobi.hpp"
#include "polarfuse/logpolar.hpp"
#include "polarfuse/manifest.hpp"
#include "polarfuse/mlp.hpp"
#include "polarfuse/pgm.hpp"
#include "polarfuse/pipeline.hpp"
#include "polarfuse/protocols.hpp"
#include "polarfuse/report.hpp"
#include "polarfuse/rng.hpp"
#include "polarfuse/synth.hpp"

#endif
