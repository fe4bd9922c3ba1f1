#pragma once

#include "json.hpp"
#include "qes/model.hpp"
#include "qes/scan.hpp"
#include "qes/verify.hpp"

namespace qes {

using json = nlohmann::ordered_json;

/// Rounds to 15 significant digits so that serialized output is stable.
double round_sig15(double v);

void to_json(json& j, const PotentialParams& p);
void from_json(const json& j, PotentialParams& p);
void to_json(json& j, const Channel& c);
void from_json(const json& j, Channel& c);
void to_json(json& j, const AnsatzExponents& e);
void from_json(const json& j, AnsatzExponents& e);
void to_json(json& j, const PrefactorPoly& f);
void from_json(const json& j, PrefactorPoly& f);
void to_json(json& j, const QesSolution& s);
void from_json(const json& j, QesSolution& s);
void to_json(json& j, const WavefunctionSample& s);
void from_json(const json& j, WavefunctionSample& s);
/// Missing fields keep their defaults, so partial config files are accepted.
void to_json(json& j, const SolverConfig& c);
void from_json(const json& j, SolverConfig& c);
void to_json(json& j, const ScanRequest& r);
void from_json(const json& j, ScanRequest& r);
void to_json(json& j, const ScanResult& r);
void to_json(json& j, const VerificationReport& r);

}  // namespace qes
