// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "railsafe/channel.hpp"
#include "railsafe/codec.hpp"
#include "railsafe/controller.hpp"
#include "railsafe/events.hpp"
#include "railsafe/rng.hpp"
#include "railsafe/scenario.hpp"
#include "railsafe/sensor.hpp"
#include "railsafe/sim.hpp"
