// Copyright 2026 The Geoleak Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GEOLEAK_LOGGING_H_
#define GEOLEAK_LOGGING_H_

#include "spdlog/logger.h"

namespace geoleak {

// Reads GEOLEAK_LOG (error, info or debug; default error) and configures
// the global logger, which writes to stderr.
// The library's logger, created on first use at the level named by
// GEOLEAK_LOG (error, info or debug; default error).
spdlog::logger& Log();

// Also makes it the process default logger.
void InitLoggingFromEnv();

}  // namespace geoleak

#endif  // GEOLEAK_LOGGING_H_
