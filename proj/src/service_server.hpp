// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 groundcite contributors

#pragma once

#include <httplib.h>

#include "groundcite/service.hpp"

namespace groundcite {

struct Service::Server {
    httplib::Server http;
};

}  // namespace groundcite
