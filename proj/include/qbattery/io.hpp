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


#ifndef QBATTERY_IO_HPP
#define QBATTERY_IO_HPP

#include <string>

#include <json.hpp>

#include "qbattery/coincidence.hpp"
#include "qbattery/tpm.hpp"
#include "qbattery/witness.hpp"

namespace qbattery {

using json = nlohmann::json;

/// Matrices are rows of entries; each entry is a real number or an [re, im]
/// pair. A flat list of n^2 entries is also accepted for square matrices.
json matrix_to_json(const Mat &m);
Mat matrix_from_json(const json &j, const std::string &path);

json vector_to_json(const RVec &v);
json real_matrix_to_json(const RMat &m);

void to_json(json &j, const SectorLengths &s);
void to_json(json &j, const WorkStatistics &s);
void to_json(json &j, const WorkHistogram &h);
void to_json(json &j, const Threshold &t);
void to_json(json &j, const PureStateReport &r);
void to_json(json &j, const WitnessReport &r);
void to_json(json &j, const TpmWeights &w);
void to_json(json &j, const TpmXiTerms &x);
void to_json(json &j, const TpmVarianceReport &r);
void to_json(json &j, const CoincidenceEstimate &e);
void to_json(json &j, const CoincidenceReport &r);

/// Shortest round-trip decimal form, independent of the C locale.
std::string format_double(double x);

} // namespace qbattery

#endif // QBATTERY_IO_HPP
