// tamerep: pair search, certificates, verification, subgroup placement.
//
// Exit codes: 0 ok, 1 internal, 2 usage/parse, 3 precondition, 4 mismatch.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "tamerep/certificate.hpp"
#include "tamerep/tamerep.hpp"

namespace {

using namespace tamerep;

enum Exit { kOk = 0, kInternal = 1, kUsage = 2, kPrecondition = 3, kMismatch = 4 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_for(Errc e) {
  switch (e) {
    case Errc::bad_input:
    case Errc::bad_bounds:
    case Errc::bad_params:
    case Errc::shape_mismatch:
      return kUsage;
    case Errc::bad_type:
    case Errc::bad_character:
    case Errc::bad_residue_char:
    case Errc::not_similitude:
    case Errc::degenerate_form:
    case Errc::odd_characteristic_required:
    case Errc::non_prime_characteristic:
    case Errc::degree_zero:
    case Errc::size_overflow:
    case Errc::singular_generator:
    case Errc::promise_unverifiable:
      return kPrecondition;
    default:
      return kInternal;
  }
}

// temp file + rename so readers never see a partial file
void write_atomically(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << text;
    if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

void emit(const std::string& output, const std::string& text) {
  if (output.empty()) {
    std::cout << text;
  } else {
    write_atomically(output, text);
  }
}

ojson read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  try {
    return ojson::parse(in);
  } catch (const ojson::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

int parse_sign(const std::string& s) {
  if (s == "+1" || s == "1" || s == "+") return 1;
  if (s == "-1" || s == "-") return -1;
  throw UsageError("--sign must be +1 or -1");
}

struct Common {
  std::string output;
  unsigned long long seed = 0;  // accepted for interface stability; every algorithm is deterministic
  unsigned jobs = 1;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--output,-o", c.output, "Write result to this file (atomic) instead of stdout");
  cmd->add_option("--seed", c.seed, "Accepted and ignored: all algorithms are deterministic");
  cmd->add_option("--jobs,-j", c.jobs, "Worker threads where supported")->check(CLI::Range(1U, 256U));
}

int run_pairs(u64 n, u64 ell, u64 p_max, u64 t_max, const Common& c) {
  if (n < 2 || n % 2 != 0) throw UsageError("--n must be even and at least 2");
  emit(c.output, pairs_to_json(search_pairs(n, ell, p_max, t_max, c.jobs)).dump(2) + "\n");
  return kOk;
}

int run_cert(const CertificateParams& p, const Common& c) {
  emit(c.output, build_certificate(p).dump(2) + "\n");
  return kOk;
}

int run_verify(const std::string& path) {
  const ojson cert = read_json(path);
  const VerifyOutcome v = verify_certificate(cert);
  for (const auto& line : v.report) std::cerr << line << "\n";
  switch (v.status) {
    case VerifyStatus::ok:
      std::cout << "OK\n";
      return kOk;
    case VerifyStatus::malformed:
      return kUsage;
    case VerifyStatus::mismatch:
      std::cout << "MISMATCH (" << v.report.size() << " differences)\n";
      return kMismatch;
  }
  return kInternal;
}

unsigned infer_degree(const ojson& gram) {
  if (gram.is_array() && !gram.empty() && gram[0].is_array() && !gram[0].empty() && gram[0][0].is_array()) {
    return static_cast<unsigned>(gram[0][0].size());
  }
  throw UsageError("cannot infer --k from the Gram file");
}

int run_classify(const std::string& gens_path, const std::string& gram_path, bool promise, u64 p,
                 std::optional<unsigned> k, const Common& c) {
  const ojson gram_json = read_json(gram_path);
  const ojson gens_json = read_json(gens_path);
  if (!gens_json.is_array() || gens_json.empty()) throw UsageError("generators file must be a non-empty JSON array");
  const Field f = make_field(p, k ? *k : infer_degree(gram_json));
  const QuadraticSpace space(matrix_from_json(gram_json, f));
  std::vector<Matrix> gens;
  for (const auto& g : gens_json) gens.push_back(matrix_from_json(g, f));

  const SubgroupPlacement placement = classify_subgroup(gens, space, promise);
  std::ostringstream text;
  text << placement_label_name(placement.label) << "\n";
  text << "generator  multiplier  det/lambda^(n/2)  spinor\n";
  ojson images = ojson::array();
  for (std::size_t i = 0; i < placement.char_images.size(); ++i) {
    const auto& ci = placement.char_images[i];
    const std::string spinor = ci.spinor ? square_class_name(*ci.spinor) : "-";
    text << i << "  " << square_class_name(ci.multiplier) << "  " << (ci.det_sign > 0 ? "+1" : "-1") << "  "
         << spinor << "\n";
    images.push_back({{"multiplier", square_class_name(ci.multiplier)},
                      {"det_ratio", ci.det_sign},
                      {"spinor", ci.spinor ? ojson(spinor) : ojson(nullptr)}});
  }
  if (!placement.note.empty()) text << "note: " << placement.note << "\n";
  std::cout << text.str();
  if (!c.output.empty()) {
    const ojson out{{"label", placement_label_name(placement.label)}, {"char_images", images}};
    write_atomically(c.output, out.dump(2) + "\n");
  }
  return kOk;
}

// Known examples, runnable without a test harness.
int run_selftest() {
  int failures = 0;
  const auto expect = [&](const std::string& name, bool ok) {
    std::cout << (ok ? "ok    " : "FAIL  ") << name << "\n";
    if (!ok) ++failures;
  };
  const Field f9 = make_field(3, 2);
  expect("make_field(3, 2) modulus x^2 + 1",
         std::vector<u64>(f9.modulus().begin(), f9.modulus().end()) == std::vector<u64>{1, 0, 1});
  expect("find_generator(F_17) = 3", find_generator(make_field(17, 1)) == make_field(17, 1).from_int(3));
  expect("mult_order_mod(19, 17) = 8", mult_order_mod(19, 17) == 8);
  expect("example21_check(8, 19, 17)", example21_check(8, 19, 17));
  expect("(8, 19, 17, +1) is O-type", classify_type(make_character(8, 19, 17, 1)) == CharacterType::o_type);

  const ResidualRep rep = build_residual_rep(make_character(8, 19, 17, 1), 13);
  const auto forms = invariant_forms(rep);
  expect("unique symmetric invariant form", forms.size() == 1 && form_kind(forms[0]) == FormKind::symmetric);
  expect("commutant dimension 1", commutant_dim(rep) == 1);
  const Group image = image_group(rep, kEnumerationLimit);
  expect("image order 136", image.order() == 136);
  expect("gamma_d(image, 8) has order 17", gamma_d(image, 8).order() == 17);
  const TypeReport type = witt_decompose(QuadraticSpace(forms[0]));
  expect("invariant form has witt index 4, epsilon +", type.witt_index == 4 && type.epsilon == 1);
  expect("|O_4^+(3)| = 1152", group_order(4, 1, 3, Flavor::o) == 1152);
  expect("|O_4^-(3)| = 1440", group_order(4, -1, 3, Flavor::o) == 1440);

  const Field f3 = make_field(3, 1);
  const QuadraticSpace hyperbolic(Matrix::from_ints(f3, {{0, 1}, {1, 0}}));
  expect("spinor norm of -I on the F_3 hyperbolic plane is a non-square",
         spinor_norm(Matrix::scalar(f3.from_int(-1), 2), hyperbolic) == SquareClass::nonsquare);
  std::cout << (failures == 0 ? "selftest passed" : "selftest FAILED") << "\n";
  return failures == 0 ? kOk : kInternal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tame self-dual residual representations: search, certify, verify, classify"};
  app.require_subcommand(1);

  Common common;
  u64 n = 0, p = 0, t = 0, ell = 0, p_max = 0, t_max = 0;
  std::string sign = "+1", cert_path, gens_path, gram_path;
  bool promise = false;
  std::optional<unsigned> k;

  auto* pairs = app.add_subcommand("pairs", "Search admissible prime pairs (p, t)");
  pairs->add_option("--n", n, "Representation dimension (even)")->required();
  pairs->add_option("--ell", ell, "Residue characteristic (odd prime)")->required();
  pairs->add_option("--p-max", p_max, "Largest p")->required();
  pairs->add_option("--t-max", t_max, "Largest t")->required();
  add_common(pairs, common);

  auto* cert = app.add_subcommand("cert", "Build and write a certificate");
  cert->add_option("--n", n)->required();
  cert->add_option("--p", p)->required();
  cert->add_option("--t", t)->required();
  cert->add_option("--sign", sign, "+1 (O-type) or -1 (S-type)")->required();
  cert->add_option("--ell", ell)->required();
  add_common(cert, common);

  auto* verify = app.add_subcommand("verify", "Recompute a certificate and compare");
  verify->add_option("certificate", cert_path)->required();
  add_common(verify, common);

  auto* classify = app.add_subcommand("classify", "Place a similitude group among PO-Omega, PSO, PO, PGO");
  classify->add_option("--generators", gens_path, "JSON array of matrices")->required();
  classify->add_option("--gram", gram_path, "JSON Gram matrix")->required();
  classify->add_option("--p", p, "Field characteristic")->required();
  classify->add_option("--k", k, "Extension degree (default: digits per entry)");
  classify->add_flag("--promise", promise, "Caller asserts the group contains Omega");
  add_common(classify, common);

  auto* selftest = app.add_subcommand("selftest", "Run built-in spot checks");
  add_common(selftest, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*pairs) return run_pairs(n, ell, p_max, t_max, common);
    if (*cert) return run_cert({n, p, t, ell, parse_sign(sign)}, common);
    if (*verify) return run_verify(cert_path);
    if (*classify) return run_classify(gens_path, gram_path, promise, p, k, common);
    if (*selftest) return run_selftest();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}
