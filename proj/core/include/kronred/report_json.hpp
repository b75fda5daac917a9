#pragma once

#include <string>

#include <json.hpp>

#include "kronred/gramian.hpp"
#include "kronred/hinf.hpp"
#include "kronred/kron.hpp"
#include "kronred/spectral.hpp"
#include "kronred/sweep.hpp"

namespace kronred {

nlohmann::json to_json(const Matrix& M);
nlohmann::json to_json(const Vector& v);
nlohmann::json to_json(const Tolerances& t);
nlohmann::json to_json(const ReducedOpenCrn& red);
nlohmann::json to_json(const OpenLinearSystem& sys);
nlohmann::json to_json(const SpectrumReport& rep);
nlohmann::json to_json(const ZeroMomentReport& rep);
nlohmann::json to_json(const DiagonalGramians& g);
nlohmann::json to_json(const BoundRecord& r);
nlohmann::json to_json(const ErrorNormReport& rep);
nlohmann::json to_json(const SupCondition& sc);
nlohmann::json to_json(const SweepRow& row);

/// Applies a JSON object of tolerance overrides (keys as in to_json(Tolerances)).
/// Unknown keys or non-numeric values raise InputError.
void apply_tolerance_overrides(Tolerances& t, const nlohmann::json& overrides);

/// Sorted keys (nlohmann objects are ordered maps), two-space indent,
/// shortest round-trip floats, trailing newline.
std::string dump_canonical(const nlohmann::json& j);

}  // namespace kronred
