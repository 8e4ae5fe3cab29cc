#pragma once

#include "asbpir/bounds.hpp"
#include "asbpir/cache.hpp"
#include "asbpir/constructions.hpp"
#include "asbpir/field.hpp"
#include "asbpir/io.hpp"
#include "asbpir/matrix.hpp"
#include "asbpir/properties.hpp"
#include "asbpir/recovery.hpp"
#include "asbpir/search.hpp"
