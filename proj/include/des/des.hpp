#pragma once

#include "des/batch.hpp"
#include "des/control.hpp"
#include "des/core_ops.hpp"
#include "des/events.hpp"
#include "des/format.hpp"
#include "des/generator.hpp"
#include "des/language.hpp"
#include "des/pipeline.hpp"
#include "des/project.hpp"
#include "des/relobs.hpp"
