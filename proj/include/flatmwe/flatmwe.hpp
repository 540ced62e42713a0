#pragma once

// Umbrella header for the flatmwe library: headless multi-word expression
// identification in dependency treebanks via parsing, tagging, or joint
// decoding.

#include "flatmwe/conllu.hpp"
#include "flatmwe/decode.hpp"
#include "flatmwe/eval.hpp"
#include "flatmwe/grad.hpp"
#include "flatmwe/model.hpp"
#include "flatmwe/oracle.hpp"
#include "flatmwe/rng.hpp"
#include "flatmwe/scores.hpp"
#include "flatmwe/spans.hpp"
#include "flatmwe/train.hpp"
#include "flatmwe/util.hpp"
