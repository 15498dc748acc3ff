#include "uprod/cli.hpp"

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "uprod/affine.hpp"
#include "uprod/chw.hpp"
#include "uprod/common.hpp"
#include "uprod/free_product.hpp"
#include "uprod/group_registry.hpp"
#include "uprod/padic.hpp"
#include "uprod/unique_product.hpp"
#include "uprod/witness_io.hpp"
#include "uprod/word.hpp"
#include "uprod/zgroup.hpp"

namespace uprod {

namespace {

using json = nlohmann::ordered_json;

struct Output {
  json payload = json::object();
  std::vector<std::string> human;
  int exit_code = 0;        // nonzero keeps the payload but reports failure
  std::string error;
};

json matrix_rows(const PadicMatrix& a) {
  json rows = json::array();
  for (int i = 0; i < a.dim; ++i) {
    json row = json::array();
    for (int j = 0; j < a.dim; ++j) row.push_back(a.at(i, j));
    rows.push_back(row);
  }
  return rows;
}

json isometry_json(const AffineIsometry& p) {
  return json{{"diag", p.diag}, {"t2", p.translation2}};
}

json up_report_json(const UPReport& r) {
  json j;
  j["unique_count"] = r.unique_count;
  j["total"] = r.total;
  json wit = json::array();
  for (const UPWitnessTriple& w : r.witnesses)
    wit.push_back(json{{"product", w.product}, {"left", w.left}, {"right", w.right}});
  j["witnesses"] = wit;
  json mult = json::object();
  for (const auto& [key, count] : r.multiplicity) mult[key] = count;
  j["multiplicity"] = mult;
  return j;
}

json series_report_json(const SeriesReport& r) {
  return json{{"term_bound", r.term_bound},
              {"headroom", r.headroom},
              {"input_precision", r.input_precision},
              {"output_precision", r.output_precision},
              {"loss", r.loss}};
}

std::vector<std::vector<long long>> load_matrix_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open matrix file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(std::string("bad matrix JSON: ") + e.what());
  }
  std::vector<std::vector<long long>> rows;
  for (const auto& row : j) {
    std::vector<long long> r;
    for (const auto& v : row) r.push_back(v.get<long long>());
    rows.push_back(std::move(r));
  }
  if (rows.empty()) fail("matrix file holds no rows");
  return rows;
}

struct PadicInput {
  std::string matrix_file;
  long long value = 0;
  bool has_value = false;
};

PadicMatrix padic_operand(const PadicInput& in, long long p, int prec, int dim) {
  if (!in.matrix_file.empty()) {
    auto rows = load_matrix_rows(in.matrix_file);
    if (static_cast<int>(rows.size()) != dim)
      fail("matrix file is " + std::to_string(rows.size()) + "x? but --dim is " +
           std::to_string(dim));
    return matrix_from_rows(p, prec, rows);
  }
  if (!in.has_value) fail("provide --matrix <file> or --value <v>");
  if (dim != 1) fail("--value only makes sense with --dim 1");
  return matrix_from_rows(p, prec, {{in.value}});
}

std::string dihedral_to_string(const DihedralElement& d) {
  if (d.is_identity()) return "1";
  std::string s;
  if (d.z_power != 0) s = "(ba)^" + std::to_string(d.z_power);
  if (d.b_flag) s += s.empty() ? "b" : " b";
  return s;
}

// Parses words for any registered group and renders results per family.
struct UpFamily {
  GroupSpecifier spec;

  template <class F>
  decltype(auto) dispatch(F&& f) const {
    return with_group(spec, std::forward<F>(f));
  }
};

std::vector<std::string> load_word_lines(const std::string& path,
                                         const std::string& expect_group) {
  WitnessFile file = load_witness_file(path);
  if (!file.group.empty() && file.group != expect_group)
    fail("file " + path + " declares group '" + file.group + "' but --group is '" +
         expect_group + "'");
  if (file.words.empty()) fail("file " + path + " holds no words");
  return file.words;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"exact unique-product / Hantzsche-Wendt group toolkit"};
  app.require_subcommand(1);

  bool as_json = false;
  std::uint64_t seed = 0;
  int workers = 1;
  long long budget_ms = 0;
  app.add_flag("--json", as_json, "machine-readable JSON output");
  app.add_option("--seed", seed, "seed for randomized commands");
  app.add_option("--workers", workers, "worker threads for counting/search");
  app.add_option("--budget-ms", budget_ms, "wall-clock cap for search commands");

  std::function<Output()> action;
  std::string command_name;
  auto arm = [&](CLI::App* cmd, std::function<Output()> fn) {
    cmd->callback([&, fn, cmd]() {
      command_name = cmd->get_parent()->get_name() + "." + cmd->get_name();
      action = fn;
    });
  };

  // ---- chw ----------------------------------------------------------
  auto* chw = app.add_subcommand("chw", "generalized Hantzsche-Wendt groups G_n");
  struct {
    int n = 2, m = 2, d = 1, bound = 12;
    long long k = 2;
    std::string w1, w2;
  } cw;

  auto chw_element_output = [](const GnElement& g) {
    Output o;
    o.payload["key"] = chw_key(g);
    o.payload["word"] = format_word(chw_to_word(g));
    o.payload["coset_word"] = g.word;
    o.payload["an_vector"] = g.squares;
    o.human.push_back(chw_key(g));
    return o;
  };

  {
    auto* c = chw->add_subcommand("normalize", "normal form of a word");
    c->add_option("--n", cw.n, "rank")->required();
    c->add_option("word", cw.w1, "generator word")->required();
    arm(c, [&]() { return chw_element_output(normalize(parse_word(cw.w1, cw.n), cw.n)); });
  }
  {
    auto* c = chw->add_subcommand("mul", "product of two words");
    c->add_option("--n", cw.n)->required();
    c->add_option("lhs", cw.w1)->required();
    c->add_option("rhs", cw.w2)->required();
    arm(c, [&]() {
      return chw_element_output(chw_multiply(normalize(parse_word(cw.w1, cw.n), cw.n),
                                             normalize(parse_word(cw.w2, cw.n), cw.n)));
    });
  }
  {
    auto* c = chw->add_subcommand("pow", "k-th power of a word");
    c->add_option("--n", cw.n)->required();
    c->add_option("word", cw.w1)->required();
    c->add_option("k", cw.k)->required();
    arm(c, [&]() {
      ChwContext ctx(cw.n);
      return chw_element_output(power(ctx, normalize(parse_word(cw.w1, cw.n), cw.n), cw.k));
    });
  }
  {
    auto* c = chw->add_subcommand("inv", "inverse of a word");
    c->add_option("--n", cw.n)->required();
    c->add_option("word", cw.w1)->required();
    arm(c, [&]() {
      return chw_element_output(chw_invert(normalize(parse_word(cw.w1, cw.n), cw.n)));
    });
  }
  {
    auto* c = chw->add_subcommand("comm", "commutator of two words");
    c->add_option("--n", cw.n)->required();
    c->add_option("lhs", cw.w1)->required();
    c->add_option("rhs", cw.w2)->required();
    arm(c, [&]() {
      ChwContext ctx(cw.n);
      return chw_element_output(commutator(ctx, normalize(parse_word(cw.w1, cw.n), cw.n),
                                           normalize(parse_word(cw.w2, cw.n), cw.n)));
    });
  }
  {
    auto* c = chw->add_subcommand("embed", "embed a G_m element into G_n");
    c->add_option("--m", cw.m, "source rank")->required();
    c->add_option("--n", cw.n, "target rank")->required();
    c->add_option("word", cw.w1)->required();
    arm(c, [&]() {
      return chw_element_output(embed(normalize(parse_word(cw.w1, cw.m), cw.m), cw.m, cw.n));
    });
  }
  {
    auto* c = chw->add_subcommand("relators", "normalize all defining relators");
    c->add_option("--n", cw.n)->required();
    arm(c, [&]() {
      RelatorReport r = relator_check(cw.n);
      Output o;
      o.payload["n"] = r.n;
      o.payload["relator_count"] = r.relator_count;
      o.payload["all_identity"] = r.all_identity;
      json fails = json::array();
      for (auto [i, j] : r.failures) fails.push_back(json::array({i, j}));
      o.payload["failures"] = fails;
      o.human.push_back("checked " + std::to_string(r.relator_count) + " relators: " +
                        (r.all_identity ? "all reduce to identity" : "FAILURES"));
      return o;
    });
  }
  {
    auto* c = chw->add_subcommand("project", "image in the quotient G_n/A_n");
    c->add_option("--n", cw.n)->required();
    c->add_option("word", cw.w1)->required();
    arm(c, [&]() {
      FPWord w = project_to_quotient(normalize(parse_word(cw.w1, cw.n), cw.n));
      Output o;
      o.payload["key"] = fp_key(w);
      o.payload["word"] = format_word(fp_to_word(w));
      o.human.push_back(w.empty() ? "(identity)" : format_word(fp_to_word(w)));
      return o;
    });
  }
  {
    auto* c = chw->add_subcommand("dihedral", "image in the infinite dihedral group");
    c->add_option("--n", cw.n)->required();
    c->add_option("--d", cw.d, "distinguished generator (maps to ba)")->required();
    c->add_option("word", cw.w1)->required();
    arm(c, [&]() {
      DihedralElement d = dihedral_image(normalize(parse_word(cw.w1, cw.n), cw.n), cw.d);
      Output o;
      o.payload["z_power"] = d.z_power;
      o.payload["b_flag"] = d.b_flag;
      o.payload["identity"] = d.is_identity();
      o.human.push_back(dihedral_to_string(d));
      return o;
    });
  }
  {
    auto* c = chw->add_subcommand("spotcheck", "bounded infinite-order check");
    c->add_option("--n", cw.n)->required();
    c->add_option("--bound", cw.bound, "largest power tested");
    c->add_option("word", cw.w1)->required();
    arm(c, [&]() {
      SpotcheckResult r =
          infinite_order_spotcheck(normalize(parse_word(cw.w1, cw.n), cw.n), cw.bound);
      Output o;
      o.payload["pass"] = r.pass;
      o.payload["bound"] = cw.bound;
      if (!r.pass) o.payload["witness_k"] = r.witness_k;
      o.human.push_back(r.pass ? "pass: no power up to bound is trivial"
                               : "FAIL: torsion witness k = " + std::to_string(r.witness_k));
      return o;
    });
  }

  // ---- fp -----------------------------------------------------------
  auto* fp = app.add_subcommand("fp", "free products of C_2's and the subgroup N");
  struct {
    int n = 2;
    std::string w1;
  } fw;
  {
    auto* c = fp->add_subcommand("reduce", "reduced form of a word");
    c->add_option("--n", fw.n)->required();
    c->add_option("word", fw.w1)->required();
    arm(c, [&]() {
      FPWord w = fp_from_word(parse_word(fw.w1, fw.n), fw.n);
      Output o;
      o.payload["key"] = fp_key(w);
      o.payload["word"] = format_word(fp_to_word(w));
      o.payload["length"] = w.letters.size();
      o.payload["parity"] = parity(w);
      o.human.push_back(w.empty() ? "(identity)" : format_word(fp_to_word(w)));
      return o;
    });
  }
  {
    auto* c = fp->add_subcommand("parity", "image under the Z/2 parity map");
    c->add_option("--n", fw.n)->required();
    c->add_option("word", fw.w1)->required();
    arm(c, [&]() {
      Output o;
      int par = parity(fp_from_word(parse_word(fw.w1, fw.n), fw.n));
      o.payload["parity"] = par;
      o.human.push_back(std::to_string(par));
      return o;
    });
  }
  {
    auto* c = fp->add_subcommand("cyclic", "cyclic reduction and conjugator");
    c->add_option("--n", fw.n)->required();
    c->add_option("word", fw.w1)->required();
    arm(c, [&]() {
      CyclicReduction r = cyclically_reduce(fp_from_word(parse_word(fw.w1, fw.n), fw.n));
      Output o;
      o.payload["core"] = format_word(fp_to_word(r.core));
      o.payload["conjugator"] = format_word(fp_to_word(r.conjugator));
      o.human.push_back("core: " + (r.core.empty() ? "(identity)" : format_word(fp_to_word(r.core))));
      o.human.push_back("conjugator: " +
                        (r.conjugator.empty() ? "(identity)" : format_word(fp_to_word(r.conjugator))));
      return o;
    });
  }
  {
    auto* c = fp->add_subcommand("torsion", "torsion classification");
    c->add_option("--n", fw.n)->required();
    c->add_option("word", fw.w1)->required();
    arm(c, [&]() {
      TorsionClass t = classify_torsion(fp_from_word(parse_word(fw.w1, fw.n), fw.n));
      Output o;
      o.payload["torsion"] = t.torsion;
      o.payload["trivial"] = t.trivial;
      if (t.torsion) o.payload["conjugate_to"] = "x" + std::to_string(t.witness_index);
      o.human.push_back(t.trivial ? "identity (torsion-free-trivial)"
                        : t.torsion
                            ? "torsion of order 2, conjugate to x" + std::to_string(t.witness_index)
                            : "infinite order");
      return o;
    });
  }
  {
    auto* c = fp->add_subcommand("to-free", "rewrite an N-word over y_j = x_j x_{j+1}");
    c->add_option("--n", fw.n)->required();
    c->add_option("word", fw.w1)->required();
    arm(c, [&]() {
      FreeWord f = to_free_generators(fp_from_word(parse_word(fw.w1, fw.n), fw.n));
      Output o;
      o.payload["free_word"] = format_word(free_to_word(f));
      o.human.push_back(f.empty() ? "(identity)" : format_word(free_to_word(f)));
      return o;
    });
  }
  {
    auto* c = fp->add_subcommand("from-free", "expand a free word back to x-letters");
    c->add_option("--n", fw.n)->required();
    c->add_option("word", fw.w1, "word in the free generators (token x<j> = y_j)")->required();
    arm(c, [&]() {
      if (fw.n < 2) fail("from-free needs rank >= 2");
      FPWord w = from_free_generators(free_from_word(parse_word(fw.w1, fw.n - 1), fw.n - 1));
      Output o;
      o.payload["key"] = fp_key(w);
      o.payload["word"] = format_word(fp_to_word(w));
      o.human.push_back(w.empty() ? "(identity)" : format_word(fp_to_word(w)));
      return o;
    });
  }

  // ---- hw -----------------------------------------------------------
  auto* hw = app.add_subcommand("hw", "Hantzsche-Wendt Bieberbach groups (affine data)");
  struct {
    std::string file, word;
  } hwa;
  {
    auto* c = hw->add_subcommand("validate", "run all validation checks");
    c->add_option("--file", hwa.file)->required();
    arm(c, [&]() {
      HWData data = hw_load_file(hwa.file);
      ValidationReport r = validate_hw(data);
      Output o;
      o.payload["n"] = data.n;
      o.payload["valid"] = r.valid;
      json checks = json::array();
      for (const ValidationCheck& c2 : r.checks)
        checks.push_back(json{{"name", c2.name}, {"ok", c2.ok}, {"detail", c2.detail}});
      o.payload["checks"] = checks;
      for (const ValidationCheck& c2 : r.checks)
        o.human.push_back(std::string(c2.ok ? "ok   " : "FAIL ") + c2.name +
                          (c2.ok ? "" : " - " + c2.detail));
      o.human.push_back(r.valid ? "valid HW datum" : "INVALID HW datum");
      if (!r.valid) {
        o.exit_code = 1;
        o.error = "invalid HW data; first failure - " + r.first_failure();
      }
      return o;
    });
  }
  {
    auto* c = hw->add_subcommand("torsion", "search all holonomy cosets for torsion");
    c->add_option("--file", hwa.file)->required();
    arm(c, [&]() {
      HWData data = hw_load_file(hwa.file);
      auto w = torsion_witness(data);
      Output o;
      o.payload["torsion_found"] = w.has_value();
      if (w) {
        o.payload["product_word"] = w->product_word;
        o.payload["witness"] = isometry_json(w->witness);
        std::string s = "torsion witness: beta_";
        for (std::size_t i = 0; i < w->product_word.size(); ++i) {
          if (i) s += " beta_";
          s += std::to_string(w->product_word[i]);
        }
        o.human.push_back(s + " (times a lattice shift)");
      } else {
        o.human.push_back("no torsion witness: every holonomy coset is torsion-free");
      }
      return o;
    });
  }
  {
    auto* c = hw->add_subcommand("surject", "build the G_{n-1} ->> Gamma certificate");
    c->add_option("--file", hwa.file)->required();
    arm(c, [&]() {
      HWData data = hw_load_file(hwa.file);
      SurjectionCertificate cert = surjection_certificate(data);
      Output o;
      o.payload["permutation"] = cert.permutation;
      o.payload["sign"] = cert.sign;
      o.payload["p"] = isometry_json(cert.p);
      o.payload["beta_n_word"] = format_word(cert.beta_n_word);
      o.payload["verified"] = true;
      std::string perm = "pi = (";
      for (std::size_t i = 0; i < cert.permutation.size(); ++i) {
        if (i) perm += ",";
        perm += std::to_string(cert.permutation[i]);
      }
      o.human.push_back(perm + "), P^2 = " + (cert.sign > 0 ? "+" : "-") + "e_n");
      o.human.push_back("beta_n = " + format_word(cert.beta_n_word));
      o.human.push_back("verified by evaluation");
      return o;
    });
  }
  {
    auto* c = hw->add_subcommand("phi", "evaluate Phi on a G_{n-1} word");
    c->add_option("--file", hwa.file)->required();
    c->add_option("word", hwa.word)->required();
    arm(c, [&]() {
      HWData data = hw_load_file(hwa.file);
      GnElement g = normalize(parse_word(hwa.word, data.n - 1), data.n - 1);
      AffineIsometry img = phi_evaluate(data, g);
      Output o;
      o.payload["isometry"] = isometry_json(img);
      o.payload["identity"] = img.is_identity();
      o.human.push_back(affine_to_string(img));
      return o;
    });
  }

  // ---- padic --------------------------------------------------------
  auto* padic = app.add_subcommand("padic", "truncated p-adic congruence-subgroup arithmetic");
  struct {
    long long p = 3;
    int prec = 12;
    int dim = 1;
    long long m = 2;
    long long trials = 100;
    PadicInput in;
  } pd;
  auto add_padic_operand = [&](CLI::App* c) {
    c->add_option("--matrix", pd.in.matrix_file, "JSON file with integer rows");
    auto* v = c->add_option("--value", pd.in.value, "integer value (1x1 matrix)");
    v->each([&](const std::string&) { pd.in.has_value = true; });
  };
  {
    auto* c = padic->add_subcommand("member", "congruence-subgroup membership");
    c->add_option("--p", pd.p)->required();
    c->add_option("--prec", pd.prec)->required();
    c->add_option("--dim", pd.dim);
    add_padic_operand(c);
    arm(c, [&]() {
      PadicMatrix a = padic_operand(pd.in, pd.p, pd.prec, pd.dim);
      Output o;
      bool member = in_congruence_subgroup(a);
      o.payload["in_subgroup"] = member;
      o.payload["level"] = congruence_level(pd.p);
      o.human.push_back(member ? "in the congruence subgroup" : "NOT in the congruence subgroup");
      return o;
    });
  }
  auto series_output = [&](const SeriesResult& r) {
    Output o;
    o.payload["matrix"] = matrix_rows(r.value);
    if (r.value.dim == 1) o.payload["value"] = r.value.at(0, 0);
    o.payload["report"] = series_report_json(r.report);
    o.human.push_back((r.value.dim == 1 ? std::to_string(r.value.at(0, 0))
                                        : matrix_rows(r.value).dump()) +
                      "  (mod " + std::to_string(pd.p) + "^" +
                      std::to_string(r.report.output_precision) + ")");
    return o;
  };
  {
    auto* c = padic->add_subcommand("log", "truncated matrix logarithm");
    c->add_option("--p", pd.p)->required();
    c->add_option("--prec", pd.prec)->required();
    c->add_option("--dim", pd.dim);
    add_padic_operand(c);
    arm(c, [&]() { return series_output(mat_log(padic_operand(pd.in, pd.p, pd.prec, pd.dim))); });
  }
  {
    auto* c = padic->add_subcommand("exp", "truncated matrix exponential");
    c->add_option("--p", pd.p)->required();
    c->add_option("--prec", pd.prec)->required();
    c->add_option("--dim", pd.dim);
    add_padic_operand(c);
    arm(c, [&]() { return series_output(mat_exp(padic_operand(pd.in, pd.p, pd.prec, pd.dim))); });
  }
  {
    auto* c = padic->add_subcommand("root", "unique m-th root in the congruence subgroup");
    c->add_option("--p", pd.p)->required();
    c->add_option("--prec", pd.prec)->required();
    c->add_option("--m", pd.m)->required();
    c->add_option("--dim", pd.dim);
    add_padic_operand(c);
    arm(c, [&]() { return series_output(nth_root(padic_operand(pd.in, pd.p, pd.prec, pd.dim), pd.m)); });
  }
  {
    auto* c = padic->add_subcommand("valcheck", "A = 1 + p^a U  =>  A^p = 1 + p^(a+1) U");
    c->add_option("--p", pd.p)->required();
    c->add_option("--prec", pd.prec)->required();
    c->add_option("--dim", pd.dim);
    add_padic_operand(c);
    arm(c, [&]() {
      PowerValuationReport r = power_valuation_check(padic_operand(pd.in, pd.p, pd.prec, pd.dim));
      Output o;
      o.payload["degenerate"] = r.degenerate;
      o.payload["a"] = r.a;
      o.payload["pass"] = r.pass;
      o.human.push_back(r.degenerate ? "degenerate pass (A = 1 at this precision)"
                        : r.pass     ? "pass at a = " + std::to_string(r.a)
                                     : "FAIL");
      return o;
    });
  }
  {
    auto* c = padic->add_subcommand("powerful", "commutators are p-th powers: random sweep");
    c->add_option("--p", pd.p)->required();
    c->add_option("--prec", pd.prec)->required();
    c->add_option("--dim", pd.dim)->required();
    c->add_option("--trials", pd.trials);
    arm(c, [&]() {
      std::mt19937_64 rng(seed);
      long long failures = 0;
      int min_val = pd.prec;
      for (long long t = 0; t < pd.trials; ++t) {
        PadicMatrix a = random_congruence_element(pd.p, pd.prec, pd.dim, rng);
        PadicMatrix b = random_congruence_element(pd.p, pd.prec, pd.dim, rng);
        try {
          PowerfulCertificate cert = powerful_certificate(a, b);
          min_val = std::min(min_val, cert.commutator_valuation);
        } catch (const error&) {
          ++failures;
        }
      }
      Output o;
      o.payload["trials"] = pd.trials;
      o.payload["failures"] = failures;
      o.payload["min_commutator_valuation"] = min_val;
      o.payload["all_pass"] = failures == 0;
      o.human.push_back("seed: " + std::to_string(seed));
      o.human.push_back(std::to_string(pd.trials - failures) + "/" + std::to_string(pd.trials) +
                        " certificates verified; min v([A,B] - 1) = " + std::to_string(min_val));
      if (failures != 0) fail("powerful certificate sweep had failures");
      return o;
    });
  }
  {
    auto* c = padic->add_subcommand("unique-roots", "power-map injectivity sweep");
    c->add_option("--p", pd.p)->required();
    c->add_option("--prec", pd.prec)->required();
    c->add_option("--m", pd.m)->required();
    c->add_option("--dim", pd.dim)->required();
    c->add_option("--trials", pd.trials);
    arm(c, [&]() {
      UniqueRootReport r = unique_root_property_check(pd.p, pd.dim, pd.m, pd.prec, pd.trials, seed);
      Output o;
      o.payload["trials"] = r.trials;
      o.payload["distinguishable_pairs"] = r.distinguishable_pairs;
      o.payload["indistinguishable_pairs"] = r.indistinguishable_pairs;
      o.payload["power_collisions"] = r.power_collisions;
      o.payload["root_mismatches"] = r.root_mismatches;
      o.payload["all_pass"] = r.all_pass;
      o.human.push_back("seed: " + std::to_string(seed));
      o.human.push_back(r.all_pass ? "all pass" : "FAILURES");
      if (!r.all_pass) fail("unique-root sweep failed");
      return o;
    });
  }

  // ---- up -----------------------------------------------------------
  auto* up = app.add_subcommand("up", "unique-product counting and witness search");
  struct {
    std::string group = "chw:2";
    std::string x_file, y_file, set_file, out_file;
    int radius = 3;
    int size = 14;
    std::string strategy = "anneal";
    bool symmetric = false;
    bool allow_identity = false;
    long long restarts = 200;
    long long moves = 40000;
  } u;
  {
    auto* c = up->add_subcommand("check", "multiplicity table for X * Y");
    c->add_option("--group", u.group)->required();
    c->add_option("--x", u.x_file)->required();
    c->add_option("--y", u.y_file)->required();
    arm(c, [&]() {
      GroupSpecifier spec = parse_group_specifier(u.group);
      return with_group(spec, [&](const auto& ctx) {
        auto xs = load_word_lines(u.x_file, spec.text);
        auto ys = load_word_lines(u.y_file, spec.text);
        std::vector<typename std::decay_t<decltype(ctx)>::element_type> xe, ye;
        for (const auto& wtext : xs) xe.push_back(evaluate_word(ctx, parse_word(wtext, ctx.rank())));
        for (const auto& wtext : ys) ye.push_back(evaluate_word(ctx, parse_word(wtext, ctx.rank())));
        UPReport r = product_report(ctx, make_subset(ctx, std::move(xe)),
                                    make_subset(ctx, std::move(ye)), workers);
        Output o;
        o.payload = up_report_json(r);
        o.human.push_back("unique products: " + std::to_string(r.unique_count) + " of " +
                          std::to_string(r.total));
        return o;
      });
    });
  }
  {
    auto* c = up->add_subcommand("square", "Strojnowski single-set check of a witness file");
    c->add_option("--group", u.group)->required();
    c->add_option("--set", u.set_file)->required();
    arm(c, [&]() {
      GroupSpecifier spec = parse_group_specifier(u.group);
      return with_group(spec, [&](const auto& ctx) {
        UPReport r = verify_witness(ctx, load_word_lines(u.set_file, spec.text), workers);
        Output o;
        o.payload = up_report_json(r);
        o.human.push_back("unique products: " + std::to_string(r.unique_count) + " of " +
                          std::to_string(r.total));
        o.human.push_back(r.unique_count == 0 ? "witness verified: no unique product"
                                              : "not a witness");
        if (r.unique_count != 0) {
          o.exit_code = 1;
          o.error = "not a witness: " + std::to_string(r.unique_count) +
                    " unique products remain";
        }
        return o;
      });
    });
  }
  {
    auto* c = up->add_subcommand("two", "two-unique-product count for X, Y");
    c->add_option("--group", u.group)->required();
    c->add_option("--x", u.x_file)->required();
    c->add_option("--y", u.y_file)->required();
    arm(c, [&]() {
      GroupSpecifier spec = parse_group_specifier(u.group);
      return with_group(spec, [&](const auto& ctx) {
        auto xs = load_word_lines(u.x_file, spec.text);
        auto ys = load_word_lines(u.y_file, spec.text);
        std::vector<typename std::decay_t<decltype(ctx)>::element_type> xe, ye;
        for (const auto& wtext : xs) xe.push_back(evaluate_word(ctx, parse_word(wtext, ctx.rank())));
        for (const auto& wtext : ys) ye.push_back(evaluate_word(ctx, parse_word(wtext, ctx.rank())));
        TwoUPReport r = two_up_report(ctx, make_subset(ctx, std::move(xe)),
                                      make_subset(ctx, std::move(ye)), workers);
        Output o;
        o.payload = up_report_json(r.base);
        o.payload["at_least_two"] = r.at_least_two;
        o.human.push_back(std::string("at least two unique products: ") +
                          (r.at_least_two ? "yes" : "NO"));
        return o;
      });
    });
  }
  {
    auto* c = up->add_subcommand("ball", "enumerate the radius ball");
    c->add_option("--group", u.group)->required();
    c->add_option("--radius", u.radius)->required();
    arm(c, [&]() {
      GroupSpecifier spec = parse_group_specifier(u.group);
      return with_group(spec, [&](const auto& ctx) {
        auto b = ball(ctx, u.radius);
        Output o;
        o.payload["size"] = b.size();
        o.payload["keys"] = b.keys;
        o.human.push_back("ball size at radius " + std::to_string(u.radius) + ": " +
                          std::to_string(b.size()));
        return o;
      });
    });
  }
  {
    auto* c = up->add_subcommand("search", "search for a nonunique-product witness");
    c->add_option("--group", u.group)->required();
    c->add_option("--size", u.size);
    c->add_option("--radius", u.radius);
    c->add_option("--strategy", u.strategy, "exhaustive-small | greedy | anneal");
    c->add_flag("--sym", u.symmetric, "restrict to symmetric candidates (S = S^-1)");
    c->add_flag("--allow-identity", u.allow_identity, "let the identity into the pool");
    c->add_option("--restarts", u.restarts);
    c->add_option("--moves", u.moves, "moves per restart");
    c->add_option("--out", u.out_file, "write the witness file here");
    arm(c, [&]() {
      GroupSpecifier spec = parse_group_specifier(u.group);
      return with_group(spec, [&](const auto& ctx) {
        using Ctx = std::decay_t<decltype(ctx)>;
        SearchOptions opts;
        opts.size = u.size;
        opts.radius = u.radius;
        opts.seed = seed;
        opts.strategy = parse_strategy(u.strategy);
        opts.symmetric = u.symmetric;
        opts.allow_identity = u.allow_identity;
        opts.restarts = u.restarts;
        opts.moves = u.moves;
        opts.budget_ms = budget_ms;
        opts.workers = workers;
        SearchOutcome<typename Ctx::element_type> got = search_witness(ctx, opts);
        Output o;
        o.payload["found"] = got.found;
        o.payload["seed"] = seed;
        o.payload["strategy"] = strategy_name(opts.strategy);
        o.payload["restarts_completed"] = got.restarts_completed;
        o.payload["budget_exhausted"] = got.budget_exhausted;
        o.human.push_back("seed: " + std::to_string(seed));
        if (!got.found) {
          o.payload["best_unique_count"] = got.best_unique_count;
          o.human.push_back("no witness found; best unique_count seen: " +
                            std::to_string(got.best_unique_count));
          o.exit_code = 1;
          o.error = "no witness found within budget";
          return o;
        }
        // Re-verify through the public checker before reporting.
        std::vector<std::string> words;
        for (const auto& e : got.witness) {
          if constexpr (std::is_same_v<Ctx, ChwContext>)
            words.push_back(format_word(chw_to_word(e)));
          else if constexpr (std::is_same_v<Ctx, FpContext>)
            words.push_back(format_word(fp_to_word(e)));
          else
            words.push_back("x1^" + std::to_string(e));
        }
        for (std::string& wtext : words)
          if (wtext.empty()) wtext = "x1^0";  // identity spelled explicitly
        UPReport check = verify_witness(ctx, words, workers);
        if (check.unique_count != 0) internal_error("search result failed re-verification");
        o.payload["unique_count"] = check.unique_count;
        o.payload["witness"] = words;
        o.human.push_back("witness of size " + std::to_string(words.size()) +
                          " verified: unique_count = 0");
        for (const std::string& wtext : words) o.human.push_back("  " + wtext);
        if (!u.out_file.empty()) {
          std::ofstream outfile(u.out_file);
          if (!outfile) fail("cannot write witness file: " + u.out_file);
          outfile << render_witness_text(spec.text, words);
          o.human.push_back("wrote " + u.out_file);
        }
        return o;
      });
    });
  }

  // ---- parse and run -------------------------------------------------
  // allow the global flags (--json, --seed, ...) after any subcommand
  std::function<void(CLI::App*)> enable_fallthrough = [&](CLI::App* node) {
    for (CLI::App* sub : node->get_subcommands({})) {
      sub->fallthrough(true);
      enable_fallthrough(sub);
    }
  };
  enable_fallthrough(&app);

  std::vector<std::string> argv(args);
  std::reverse(argv.begin(), argv.end());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  } catch (const error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  json envelope;
  envelope["status"] = "ok";
  envelope["command"] = command_name;
  envelope["seed"] = seed;
  try {
    Output o = action();
    if (o.exit_code != 0) {
      envelope["status"] = "error";
      envelope["error"] = o.error;
    }
    envelope["payload"] = o.payload;
    envelope["diagnostics"] = json::array();
    if (as_json) {
      out << envelope.dump() << "\n";
    } else {
      for (const std::string& line : o.human) out << line << "\n";
      if (o.exit_code != 0) err << "error: " << o.error << "\n";
    }
    return o.exit_code;
  } catch (const error& e) {
    if (as_json) {
      json bad;
      bad["status"] = "error";
      bad["command"] = command_name;
      bad["seed"] = seed;
      bad["error"] = e.what();
      out << bad.dump() << "\n";
    } else {
      err << "error: " << e.what() << "\n";
    }
    return 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace uprod
