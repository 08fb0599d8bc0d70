// Copyright 2026 The qbattery Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QBATTERY_LOG_HPP
#define QBATTERY_LOG_HPP

#include <functional>
#include <string_view>

namespace qbattery {

using WarningSink = std::function<void(std::string_view)>;

/// Route library warnings; the default sink writes to stderr. Passing an
/// empty function restores the default. Returns the previous sink.
WarningSink set_warning_sink(WarningSink sink);

void log_warning(std::string_view message);

} // namespace qbattery

#endif // QBATTERY_LOG_HPP
