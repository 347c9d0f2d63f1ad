#pragma once

#include "pulseir/applications.hpp"
#include "pulseir/error.hpp"
#include "pulseir/eval.hpp"
#include "pulseir/json_io.hpp"
#include "pulseir/kind.hpp"
#include "pulseir/node.hpp"
#include "pulseir/passes.hpp"
#include "pulseir/scalar.hpp"
#include "pulseir/schedule.hpp"
#include "pulseir/targets.hpp"
#include "pulseir/visitor.hpp"
#include "pulseir/waveform.hpp"
