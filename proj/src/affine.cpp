#include "uprod/affine.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace uprod {

bool AffineIsometry::is_identity() const {
  return is_pure_translation() &&
         std::all_of(translation2.begin(), translation2.end(),
                     [](long long v) { return v == 0; });
}

bool AffineIsometry::is_pure_translation() const {
  return std::all_of(diag.begin(), diag.end(), [](int d) { return d == 1; });
}

AffineIsometry affine_identity(int n) {
  AffineIsometry p;
  p.diag.assign(static_cast<std::size_t>(n), 1);
  p.translation2.assign(static_cast<std::size_t>(n), 0);
  return p;
}

AffineIsometry compose(const AffineIsometry& p, const AffineIsometry& q) {
  if (p.n() != q.n()) fail("dimension mismatch in compose");
  AffineIsometry out;
  out.diag.resize(p.diag.size());
  out.translation2.resize(p.diag.size());
  for (std::size_t j = 0; j < p.diag.size(); ++j) {
    out.diag[j] = p.diag[j] * q.diag[j];
    out.translation2[j] = p.diag[j] * q.translation2[j] + p.translation2[j];
  }
  return out;
}

AffineIsometry inverse(const AffineIsometry& p) {
  AffineIsometry out;
  out.diag = p.diag;  // B^-1 = B
  out.translation2.resize(p.diag.size());
  for (std::size_t j = 0; j < p.diag.size(); ++j)
    out.translation2[j] = -p.diag[j] * p.translation2[j];
  return out;
}

AffineIsometry affine_power(const AffineIsometry& p, long long k) {
  AffineIsometry base = p;
  if (k < 0) {
    base = inverse(p);
    k = -k;
  }
  AffineIsometry acc = affine_identity(p.n());
  while (k > 0) {
    if (k & 1) acc = compose(acc, base);
    base = compose(base, base);
    k >>= 1;
  }
  return acc;
}

std::string affine_to_string(const AffineIsometry& p) {
  std::string s = "diag(";
  for (std::size_t j = 0; j < p.diag.size(); ++j) {
    if (j) s += ',';
    s += p.diag[j] > 0 ? "+1" : "-1";
  }
  s += "), t2=(";
  for (std::size_t j = 0; j < p.translation2.size(); ++j) {
    if (j) s += ',';
    s += std::to_string(p.translation2[j]);
  }
  s += ')';
  return s;
}

AffineIsometry HWData::generator(int i) const {
  if (i < 1 || i > n) fail("generator index out of range");
  AffineIsometry g;
  g.diag.assign(static_cast<std::size_t>(n), -1);
  g.diag[static_cast<std::size_t>(i - 1)] = 1;
  g.translation2 = b2[static_cast<std::size_t>(i - 1)];
  return g;
}

HWData hw_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(std::string("bad HW JSON: ") + e.what());
  }
  if (!j.contains("n") || !j.contains("b2")) fail("HW JSON needs fields 'n' and 'b2'");
  HWData data;
  data.n = j["n"].get<int>();
  if (data.n < 1 || data.n > 15) fail("n must be in 1..15");
  for (const auto& row : j["b2"]) {
    std::vector<long long> r;
    for (const auto& v : row) r.push_back(v.get<long long>());
    data.b2.push_back(std::move(r));
  }
  if (static_cast<int>(data.b2.size()) != data.n) fail("b2 must have n rows");
  for (const auto& row : data.b2)
    if (static_cast<int>(row.size()) != data.n) fail("b2 rows must have n entries");
  return data;
}

std::string hw_to_json_text(const HWData& data) {
  nlohmann::ordered_json j;
  j["n"] = data.n;
  j["b2"] = data.b2;
  return j.dump();
}

HWData hw_load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open HW data file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return hw_from_json_text(ss.str());
}

namespace {

bool shape_ok(const HWData& data, std::string& why) {
  if (data.n < 1) {
    why = "dimension must be positive";
    return false;
  }
  if (data.n > 15) {
    why = "dimension capped at 15 (holonomy enumeration is 2^(n-1))";
    return false;
  }
  if (static_cast<int>(data.b2.size()) != data.n) {
    why = "b2 must have n rows";
    return false;
  }
  for (const auto& row : data.b2)
    if (static_cast<int>(row.size()) != data.n) {
      why = "b2 rows must have n entries";
      return false;
    }
  return true;
}

// Product over an ascending index subset, with the translation mod-2Z shape
// left exact.
AffineIsometry subset_product(const HWData& data, unsigned mask) {
  AffineIsometry acc = affine_identity(data.n);
  for (int i = 1; i <= data.n; ++i)
    if (mask & (1u << (i - 1))) acc = compose(acc, data.generator(i));
  return acc;
}

std::vector<int> subset_indices(unsigned mask, int n) {
  std::vector<int> idx;
  for (int i = 1; i <= n; ++i)
    if (mask & (1u << (i - 1))) idx.push_back(i);
  return idx;
}

}  // namespace

std::optional<TorsionWitness> torsion_witness(const HWData& data) {
  std::string why;
  if (!shape_ok(data, why)) fail("malformed HW data: " + why);
  const unsigned full = (data.n >= 31) ? 0u : ((1u << data.n) - 1u);
  for (unsigned mask = 1; mask < full; ++mask) {
    AffineIsometry g = subset_product(data, mask);
    if (g.is_pure_translation()) continue;  // identity holonomy: excluded
    bool integral_on_fixed = true;
    for (std::size_t j = 0; j < g.diag.size(); ++j) {
      if (g.diag[j] == 1 && (((g.translation2[j] % 2) + 2) % 2) != 0) {
        integral_on_fixed = false;
        break;
      }
    }
    if (!integral_on_fixed) continue;
    // Shift by an integer translation to zero the fixed coordinates; the
    // result squares to the identity.
    TorsionWitness w;
    w.product_word = subset_indices(mask, data.n);
    w.witness = g;
    for (std::size_t j = 0; j < g.diag.size(); ++j)
      if (g.diag[j] == 1) w.witness.translation2[j] = 0;
    if (!compose(w.witness, w.witness).is_identity())
      internal_error("torsion witness does not square to identity");
    return w;
  }
  return std::nullopt;
}

ValidationReport validate_hw(const HWData& data) {
  ValidationReport report;
  auto add = [&report](const std::string& name, bool ok, const std::string& detail) {
    report.checks.push_back(ValidationCheck{name, ok, detail});
    return ok;
  };

  std::string why;
  if (!shape_ok(data, why)) {
    add("shape", false, why);
    return report;
  }

  bool shape = true;
  shape &= add("dimension_odd", data.n % 2 == 1,
               "n = " + std::to_string(data.n) + "; dimension must be odd");
  bool binary = true;
  for (const auto& row : data.b2)
    for (long long v : row) binary &= (v == 0 || v == 1);
  shape &= add("entries_binary", binary, "doubled translations must lie in {0,1}");
  bool diag_half = true;
  for (int i = 1; i <= data.n; ++i)
    diag_half &= data.b2[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(i - 1)] == 1;
  shape &= add("squares_are_lattice_basis", diag_half,
               "beta_i^2 = e_i forces [b_i]_i = 1/2");
  if (!shape) return report;

  bool relators = true;
  for (int i = 1; i <= data.n && relators; ++i) {
    for (int j = 1; j <= data.n; ++j) {
      if (i == j) continue;
      AffineIsometry bi = data.generator(i), bj = data.generator(j);
      AffineIsometry bj2 = compose(bj, bj);
      AffineIsometry rel = compose(compose(compose(inverse(bi), bj2), bi), bj2);
      if (!rel.is_identity()) {
        relators = false;
        break;
      }
    }
  }
  add("relators", relators, "beta_i^-1 beta_j^2 beta_i beta_j^2 = 1 for i != j");

  AffineIsometry all = subset_product(data, (1u << data.n) - 1u);
  bool closure = all.is_pure_translation();
  for (long long v : all.translation2) closure &= (((v % 2) + 2) % 2) == 0;
  add("lattice_closure", closure,
      "beta_1...beta_n must be an integer translation (every column sum even)");

  int odd_count = 0;
  for (int i = 1; i < data.n; ++i)
    if (data.b2[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(data.n - 1)] == 1)
      ++odd_count;
  add("parity_condition", odd_count % 2 == 1,
      "|{i in 1..n-1 : [b_i]_n = 1/2}| = " + std::to_string(odd_count) +
          "; must be odd");

  auto witness = torsion_witness(data);
  std::string detail = "no finite-order element in any holonomy coset";
  if (witness) {
    detail = "torsion witness: product of beta_";
    for (std::size_t k = 0; k < witness->product_word.size(); ++k) {
      if (k) detail += ",";
      detail += std::to_string(witness->product_word[k]);
    }
  }
  add("torsion_free", !witness.has_value(), detail);

  report.valid = std::all_of(report.checks.begin(), report.checks.end(),
                             [](const ValidationCheck& c) { return c.ok; });
  return report;
}

std::string ValidationReport::first_failure() const {
  for (const ValidationCheck& c : checks)
    if (!c.ok) return c.name + ": " + c.detail;
  return "";
}

AffineIsometry permutation_product(const HWData& data, const std::vector<int>& pi) {
  std::string why;
  if (!shape_ok(data, why)) fail("malformed HW data: " + why);
  if (static_cast<int>(pi.size()) != data.n - 1) fail("pi must permute 1..n-1");
  std::vector<bool> seen(static_cast<std::size_t>(data.n), false);
  for (int v : pi) {
    if (v < 1 || v > data.n - 1 || seen[static_cast<std::size_t>(v)])
      fail("pi must permute 1..n-1");
    seen[static_cast<std::size_t>(v)] = true;
  }
  AffineIsometry acc = affine_identity(data.n);
  for (int v : pi) acc = compose(acc, data.generator(v));
  return acc;
}

SurjectionCertificate surjection_certificate(const HWData& data) {
  ValidationReport report = validate_hw(data);
  if (!report.valid)
    fail("surjection certificate requires valid HW data; failed " +
         report.first_failure());

  SurjectionCertificate cert;
  const int n = data.n;
  // J = {i < n : [b_i]_n = 1/2} listed first makes the alternating sum in
  // coordinate n telescope to 1/2.
  std::vector<int> in_j, out_j;
  for (int i = 1; i < n; ++i) {
    if (data.b2[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(n - 1)] == 1)
      in_j.push_back(i);
    else
      out_j.push_back(i);
  }
  cert.permutation = in_j;
  cert.permutation.insert(cert.permutation.end(), out_j.begin(), out_j.end());
  cert.p = permutation_product(data, cert.permutation);

  long long pn = cert.p.translation2[static_cast<std::size_t>(n - 1)];
  if (pn != 1 && pn != -1)
    internal_error("permutation product does not square to +-e_n");
  cert.sign = static_cast<int>(pn);

  // lambda = beta_1...beta_n is an integer translation; write it over
  // e_i = beta_i^2 (i < n) and e_n = sign * P^2.
  AffineIsometry lambda = affine_identity(n);
  for (int i = 1; i <= n; ++i) lambda = compose(lambda, data.generator(i));
  if (!lambda.is_pure_translation()) internal_error("beta_1...beta_n is not a translation");
  std::vector<long long> c(static_cast<std::size_t>(n), 0);
  for (int j = 0; j < n; ++j) {
    long long t = lambda.translation2[static_cast<std::size_t>(j)];
    if (((t % 2) + 2) % 2 != 0) internal_error("beta_1...beta_n is not in the lattice");
    c[static_cast<std::size_t>(j)] = t / 2;
  }

  // beta_n = beta_{n-1}^-1 ... beta_1^-1 * lambda
  GeneratorWord word;
  for (int i = n - 1; i >= 1; --i) word.tokens.push_back(WordToken{i, -1});
  for (int i = 1; i < n; ++i)
    if (c[static_cast<std::size_t>(i - 1)] != 0)
      word.tokens.push_back(WordToken{i, 2 * c[static_cast<std::size_t>(i - 1)]});
  long long p_reps = 2 * cert.sign * c[static_cast<std::size_t>(n - 1)];
  if (p_reps >= 0) {
    for (long long r = 0; r < p_reps; ++r)
      for (int v : cert.permutation) word.tokens.push_back(WordToken{v, 1});
  } else {
    for (long long r = 0; r < -p_reps; ++r)
      for (auto it = cert.permutation.rbegin(); it != cert.permutation.rend(); ++it)
        word.tokens.push_back(WordToken{*it, -1});
  }
  cert.beta_n_word = word;

  // Verify by evaluation before returning.
  AffineIsometry value = affine_identity(n);
  for (const WordToken& t : word.tokens)
    value = compose(value, affine_power(data.generator(t.index), t.exponent));
  if (!(value == data.generator(n)))
    internal_error("certificate word does not evaluate to beta_n");
  return cert;
}

AffineIsometry phi_evaluate(const HWData& data, const GnElement& g) {
  ValidationReport report = validate_hw(data);
  if (!report.valid)
    fail("phi requires valid HW data; failed " + report.first_failure());
  if (g.rank() != data.n - 1)
    fail("phi expects a G_" + std::to_string(data.n - 1) + " element, got rank " +
         std::to_string(g.rank()));
  AffineIsometry acc = affine_identity(data.n);
  for (int letter : g.word) acc = compose(acc, data.generator(letter));
  // Phi(x_i^2) = e_i: the vector part contributes the translation 2a_i.
  AffineIsometry tail = affine_identity(data.n);
  for (int i = 1; i < data.n; ++i)
    tail.translation2[static_cast<std::size_t>(i - 1)] =
        2 * g.squares[static_cast<std::size_t>(i - 1)];
  return compose(acc, tail);
}

std::vector<HWData> enumerate_valid_dimension3() {
  std::vector<HWData> found;
  // Six free off-diagonal posts; the diagonal is pinned to 1.
  for (unsigned mask = 0; mask < 64; ++mask) {
    HWData data;
    data.n = 3;
    data.b2.assign(3, std::vector<long long>(3, 0));
    unsigned bit = 0;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        if (i == j)
          data.b2[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = 1;
        else
          data.b2[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
              (mask >> bit++) & 1u;
      }
    }
    if (validate_hw(data).valid) found.push_back(std::move(data));
  }
  return found;
}

}  // namespace uprod
