#pragma once

#include <initializer_list>
#include <string>

#include "json.hpp"
#include "wmlab/boolfn.hpp"
#include "wmlab/genmodel.hpp"
#include "wmlab/minsolve.hpp"
#include "wmlab/tasks.hpp"
#include "wmlab/transforms.hpp"

namespace wmlab {

using nlohmann::json;

// Throws ValidationError naming the first key of `j` not in `allowed`.
void require_keys_subset(const json& j, std::initializer_list<const char*> allowed, const std::string& where);

json to_json(const TruthTable& t);
TruthTable truth_table_from_json(const json& j);
json to_json(const FourierSpectrum& s);
FourierSpectrum spectrum_from_json(const json& j);

json subset_json(Mask s);
Mask subset_from_json(const json& j, int n);

json model_to_json(const ModelSpec& m);
// Accepts a built-in name ("table1", ...) or an inline model object.
ModelSpec model_from_json(const json& j);
std::string model_hash(const ModelSpec& m);
// Name for built-ins, "sha:<hex>" style digest otherwise.
std::string model_reference(const ModelSpec& m);

// {"model": ref, "labels": [...]} or {"model": ref, "over": "x"|"z", "expr": [{"subset", "sign"|"coeff"}...]}
SupportedTask task_from_json(const json& j);
json task_to_json(const SupportedTask& t);
// Symbolic expression as a table over the data ("x", m coords) or latent ("z", d coords) cube.
TruthTable expr_table(const json& expr, int n);

json solution_to_json(const MinDegreeSolution& s);

json bijection_to_json(const CubeBijection& t);
// {"d", "perm"}, a bare permutation array, {"perm", "signs"} (signed permutation)
// or {"components": [{"subset", "sign"}...]} giving T_i as signed parities.
CubeBijection bijection_from_json(const json& j);
json to_json(const SignedPermutation& p);

BasisTransform basis_from_json(const json& j, int m);

TaskFamily family_from_json(const json& j, ModelPtr model);

}  // namespace wmlab
