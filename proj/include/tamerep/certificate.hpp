#pragma once

// JSON certificates for the residual representation of a tame character.
// Every field is a function of params alone; verification rebuilds the
// certificate and diffs it against the input.

#include <nlohmann/json.hpp>

#include <set>
#include <string>
#include <vector>

#include "tamerep/arith.hpp"
#include "tamerep/group.hpp"
#include "tamerep/induce.hpp"
#include "tamerep/orthogonal.hpp"
#include "tamerep/tame_character.hpp"

namespace tamerep {

using ojson = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";
inline constexpr std::size_t kCertificateGroupCap = kEnumerationLimit;

// Matrices are [row][col][coefficient], coefficients low degree first.
inline ojson matrix_to_json(const Matrix& m) {
  ojson rows = ojson::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    ojson row = ojson::array();
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const auto e = m.entry(i, j);
      row.push_back(std::vector<u64>(e.begin(), e.end()));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Throws Error(bad_input) on anything that is not a well-formed matrix over f.
template <class Json>
Matrix matrix_from_json(const Json& j, const Field& f) {
  const auto bad = [](const std::string& m) { raise(Errc::bad_input, m); };
  if (!j.is_array() || j.empty()) bad("matrix must be a non-empty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) bad("matrix rows must be non-empty arrays");
  const std::size_t cols = j[0].size();
  Matrix m(f, rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) bad("ragged matrix");
    for (std::size_t c = 0; c < cols; ++c) {
      const auto& e = j[r][c];
      if (!e.is_array()) bad("field elements must be arrays of base-p digits");
      Coeffs coeffs;
      for (const auto& d : e) {
        if (!d.is_number_unsigned() && !(d.is_number_integer() && d.template get<long long>() >= 0)) {
          bad("digits must be non-negative integers");
        }
        coeffs.push_back(d.template get<u64>());
      }
      m.set(r, c, f.from_coeffs(std::move(coeffs)));
    }
  }
  return m;
}

struct CertificateParams {
  u64 n = 0, p = 0, t = 0, ell = 0;
  int sign = 1;
};

inline ojson build_certificate(const CertificateParams& params) {
  const TameCharacter chi = make_character(params.n, params.p, params.t, params.sign);
  const CharacterType type = classify_type(chi);
  const ResidualRep rep = build_residual_rep(chi, params.ell);
  const auto forms = invariant_forms(rep);
  const bool unique_form = forms.size() == 1;
  const Matrix gram = unique_form ? forms.front() : Matrix(rep.field, chi.n, chi.n);
  const FormKind kind = form_kind(gram);

  ojson cert;
  cert["schema_version"] = kSchemaVersion;
  cert["params"] = {{"n", chi.n}, {"p", chi.p}, {"t", chi.t}, {"ell", rep.ell}, {"k", rep.k}, {"sign", chi.sign}};
  cert["matrices"] = {{"phi", matrix_to_json(rep.phi)}, {"sigma", matrix_to_json(rep.sigma)}};
  cert["gram"] = matrix_to_json(gram);
  cert["form_kind"] = form_kind_name(kind);

  std::optional<TypeReport> witt;
  if (kind == FormKind::symmetric) witt = witt_decompose(QuadraticSpace(gram));
  cert["witt_index"] = witt ? ojson(witt->witt_index) : ojson(nullptr);
  cert["epsilon"] = witt ? ojson(witt->epsilon == 1 ? "+" : "-") : ojson(nullptr);

  const Group image = image_group(rep, kCertificateGroupCap);
  const auto witness = is_metacyclic_tn(image, chi.t, chi.n);
  cert["image_order"] = image.order();
  cert["metacyclic"] = witness.has_value();

  const auto normals = normal_subgroups(image);
  ojson table = ojson::array();
  for (u64 d : {u64{1}, u64{2}, u64{4}, u64{8}, chi.n * chi.t}) {
    table.push_back({{"d", d}, {"subgroup_order", gamma_d(image, d, normals).order()}});
  }
  cert["gamma_d_table"] = std::move(table);

  ojson audit = ojson::array();
  for (const auto& item : audit_adz(chi.n, rep.ell, chi.p, chi.t)) {
    audit.push_back({{"condition", item.condition}, {"status", audit_status_name(item.status)}});
  }
  cert["adz_audit"] = std::move(audit);

  bool preserved = unique_form;
  for (const auto& m : rep.generators()) preserved = preserved && m.transpose() * gram * m == gram;
  const u64 expected_order = chi.n * chi.t * (type == CharacterType::s_type ? 2 : 1);
  const auto check = [](const std::string& name, bool pass) { return ojson{{"name", name}, {"pass", pass}}; };
  cert["checks"] = ojson::array({
      check("tame relation", tame_relation_holds(rep)),
      check("unique invariant form", unique_form),
      check("form preserved by generators", preserved),
      check("form kind matches type",
            kind == (type == CharacterType::o_type ? FormKind::symmetric : FormKind::alternating)),
      check("absolutely irreducible", commutant_dim(rep) == 1),
      check("image order", image.order() == expected_order),
      check("conjugation exponent = p mod t", witness && witness->exponent == chi.p % chi.t),
  });
  return cert;
}

enum class VerifyStatus { ok, malformed, mismatch };

struct VerifyOutcome {
  VerifyStatus status = VerifyStatus::ok;
  std::vector<std::string> report;  // one line per problem
};

namespace detail {

inline bool has_exact_keys(const ojson& j, const std::vector<std::string>& keys, const std::string& where,
                           std::vector<std::string>& report) {
  if (!j.is_object()) {
    report.push_back(where + ": expected an object");
    return false;
  }
  bool ok = true;
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items()) {
    if (!allowed.contains(k)) {
      report.push_back(where + ": unknown field '" + k + "'");
      ok = false;
    }
  }
  for (const auto& k : keys) {
    if (!j.contains(k)) {
      report.push_back(where + ": missing field '" + k + "'");
      ok = false;
    }
  }
  return ok;
}

}  // namespace detail

/// Malformed: wrong schema, unknown or missing fields, unusable params.
/// Mismatch: well-formed but some recomputed field differs.
inline VerifyOutcome verify_certificate(const ojson& cert) {
  VerifyOutcome out;
  const auto malformed = [&](std::string why) {
    out.status = VerifyStatus::malformed;
    out.report.push_back(std::move(why));
    return out;
  };
  if (!cert.is_object()) return malformed("certificate must be a JSON object");
  if (!cert.contains("schema_version") || cert["schema_version"] != kSchemaVersion) {
    return malformed("unsupported schema_version (expected \"1\")");
  }
  const std::vector<std::string> top{"schema_version", "params",        "matrices",   "gram",
                                     "form_kind",      "witt_index",    "epsilon",    "image_order",
                                     "metacyclic",     "gamma_d_table", "adz_audit",  "checks"};
  if (!detail::has_exact_keys(cert, top, "certificate", out.report)) {
    out.status = VerifyStatus::malformed;
    return out;
  }
  const ojson& params = cert["params"];
  if (!detail::has_exact_keys(params, {"n", "p", "t", "ell", "k", "sign"}, "params", out.report) ||
      !detail::has_exact_keys(cert["matrices"], {"phi", "sigma"}, "matrices", out.report)) {
    out.status = VerifyStatus::malformed;
    return out;
  }
  for (const char* key : {"n", "p", "t", "ell", "k"}) {
    if (!params[key].is_number_unsigned()) return malformed(std::string("params.") + key + " must be a positive integer");
  }
  if (!params["sign"].is_number_integer()) return malformed("params.sign must be +1 or -1");

  CertificateParams p;
  p.n = params["n"].get<u64>();
  p.p = params["p"].get<u64>();
  p.t = params["t"].get<u64>();
  p.ell = params["ell"].get<u64>();
  p.sign = params["sign"].get<int>();
  const ojson fresh = build_certificate(p);  // precondition failures propagate as Error

  for (const auto& op : ojson::diff(fresh, cert)) {
    std::string line = op["op"].get<std::string>() + " " + op["path"].get<std::string>();
    if (op.contains("value")) line += " = " + op["value"].dump();
    if (op["op"] == "replace") {
      line += " (expected " + fresh.at(ojson::json_pointer(op["path"].get<std::string>())).dump() + ")";
    }
    out.report.push_back(std::move(line));
  }
  if (!out.report.empty()) out.status = VerifyStatus::mismatch;
  return out;
}

inline ojson pairs_to_json(const std::vector<PairCandidate>& pairs) {
  ojson out = ojson::array();
  for (const auto& c : pairs) {
    ojson flags{{"t_one_mod_n", c.flags.t_one_mod_n},
                {"order_is_n", c.flags.order_is_n},
                {"p_gt_n", c.flags.p_gt_n},
                {"no_subfield_factor", c.flags.no_subfield_factor}};
    if (c.flags.p_gt_ell) flags["p_gt_ell"] = *c.flags.p_gt_ell;
    if (c.flags.t_gt_ell) flags["t_gt_ell"] = *c.flags.t_gt_ell;
    out.push_back({{"n", c.n}, {"p", c.p}, {"t", c.t}, {"flags", std::move(flags)}});
  }
  return out;
}

}  // namespace tamerep
