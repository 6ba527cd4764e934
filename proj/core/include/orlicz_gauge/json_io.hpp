#pragma once

#include <map>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "orlicz_gauge/convergence.hpp"
#include "orlicz_gauge/function_catalog.hpp"
#include "orlicz_gauge/hk_integral.hpp"
#include "orlicz_gauge/partition.hpp"
#include "orlicz_gauge/young_modular.hpp"

namespace orlicz::json_io {

using nlohmann::json;

/// Numeric parameters inside a template may be expression strings in `n`;
/// `$name` placeholders are replaced by the bound parameter values first.
struct Bindings {
  std::optional<double> n;
  std::map<std::string, double> parameters;
};

// Grammar. All readers throw Error(kValidation) with a JSON-pointer-like
// path on unknown keys, missing keys and wrong types.
FunctionSpec function_from_json(const json& j, const Bindings& b = {});
json to_json(const FunctionSpec& f);

/// Accepts {"components", "norm", "domain"} or a bare function object,
/// which becomes a scalar spec on `default_domain`.
VectorFunctionSpec vector_from_json(const json& j, Interval default_domain,
                                    const Bindings& b = {});
json to_json(const VectorFunctionSpec& f);

YoungFunctionSpec young_from_json(const json& j);
json to_json(const YoungFunctionSpec& th);

WeightedMeasure measure_from_json(const json& j);
json to_json(const WeightedMeasure& m);

QuadratureConfig quadrature_from_json(const json& j, QuadratureConfig base = {});
json to_json(const QuadratureConfig& cfg);

TaggedPartition partition_from_json(const json& j);
json to_json(const TaggedPartition& p);

/// {"template", "limit", "n_max"}; template parameters may be expressions
/// in n and `$name` placeholders bound by `parameters`.
SequenceSpec sequence_from_json(const json& j, Interval default_domain,
                                const std::map<std::string, double>& parameters = {});

/// {"name", "sequence", "sweep": [{name: value}, ...]}.
FamilyTemplate family_from_json(const json& j, Interval default_domain);

// Reports. Non-finite numbers are written as "inf", "-inf" or null (NaN).
json number(double x);
double number_from_json(const json& j);

/// A scalar integral writes "value" as a number, a vector one as an array.
json to_json(const IntegralResult& r);
json to_json(const SupNormEstimate& r);
json to_json(const AlexiewiczResult& r);
json to_json(const ModularValue& v);
json to_json(const NormValue& v);
json to_json(const AxiomReport& r);
json to_json(const MembershipReport& r);
json to_json(const ConvexityVerdict& r);
json to_json(const EmbeddingReport& r);
json to_json(const Classification& c);
json to_json(const ConvergenceReport& r);
json to_json(const ImplicationTable& t);
json to_json(const Candidate& c);

/// Wraps a report body as {"report": kind, "schema_version": 1, ...body}.
json envelope(const std::string& kind, json body);

/// Checks an enveloped report against the schema for its kind; returns an
/// empty string when valid, otherwise the first problem found.
std::string validate_report(const json& report);

inline constexpr int kSchemaVersion = 1;

}  // namespace orlicz::json_io
