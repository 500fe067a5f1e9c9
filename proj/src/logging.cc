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

#include "geoleak/logging.h"

#include <cstdlib>
#include <string>

#include "spdlog/sinks/stdout_color_sinks.h"
#include "spdlog/spdlog.h"

namespace geoleak {

namespace {

std::shared_ptr<spdlog::logger> CreateLogger() {
  auto logger = spdlog::get("geoleak");
  if (!logger) logger = spdlog::stderr_color_mt("geoleak");
  spdlog::level::level_enum level = spdlog::level::err;
  std::string unknown;
  if (const char* env = std::getenv("GEOLEAK_LOG")) {
    const std::string value(env);
    if (value == "debug") {
      level = spdlog::level::debug;
    } else if (value == "info") {
      level = spdlog::level::info;
    } else if (value != "error") {
      unknown = value;
    }
  }
  logger->set_level(level);
  if (!unknown.empty()) logger->error("unrecognized GEOLEAK_LOG value '{}', using error", unknown);
  return logger;
}

}  // namespace

spdlog::logger& Log() {
  static const std::shared_ptr<spdlog::logger> logger = CreateLogger();
  return *logger;
}

void InitLoggingFromEnv() {
  Log();
  spdlog::set_default_logger(spdlog::get("geoleak"));
}

}  // namespace geoleak
