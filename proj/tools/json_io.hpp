#pragma once

#include <json.hpp>

#include "sphere_hofa/counting.hpp"
#include "sphere_hofa/equidist.hpp"
#include "sphere_hofa/fpoly.hpp"
#include "sphere_hofa/msets.hpp"
#include "sphere_hofa/quadform.hpp"

namespace shofa::cli {

using json = nlohmann::json;

Rat parse_rat(const json& j);
json rat_json(const Rat& q);
Vec parse_vec(const json& j);

// {"nvars": n, "terms": [{"exp": [...], "coeff": c}]}; c an integer or "a/b".
RatMultiPoly parse_rat_poly(const json& j);
FpMultiPoly parse_fp_poly(const json& j, i64 p);
json poly_json(const RatMultiPoly& f);
json poly_json(const FpMultiPoly& f);

// {"A": [[..]], "u": [..], "v": c} or {"sphere": r, "d": d}.
QuadForm parse_form(const json& j, i64 p, int dim_hint);
json form_json(const QuadForm& M);
json matrix_json(const FpMatrix& m);

// {"k": k, "functions": [{"b": {"i,j": c}, "v": [[..]], "u": c}]} with 1-based
// blocks, or {"gowers": s}.
MFamily parse_family(const json& j, const QuadForm& M);
json family_json(const MFamily& fam);

// {"m", "s", "d", "coeffs": [{"index": [..], "value": ["a/b", ..]}]}.
TorusPolySeq parse_seq(const json& j);
json seq_json(const TorusPolySeq& g);

json count_json(const CountReport& r);

}  // namespace shofa::cli
