#pragma once

#include "sharpcheck/certify.hpp"
#include "sharpcheck/commands.hpp"
#include "sharpcheck/io.hpp"
