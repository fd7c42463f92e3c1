/*
 * Copyright 2026 The shapbox Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SHAPBOX_TOOLS_APP_CLI_HPP_
#define SHAPBOX_TOOLS_APP_CLI_HPP_

#include <iosfwd>

namespace shapbox::app {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;      // bad flags, instance or background
inline constexpr int kExitModel = 3;      // model failed to load or evaluate
inline constexpr int kExitPortInUse = 4;

// Entry point for the shapbox command-line tool.
int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace shapbox::app

#endif  // SHAPBOX_TOOLS_APP_CLI_HPP_
