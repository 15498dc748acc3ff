// Exact arithmetic for Hantzsche-Wendt Bieberbach groups given as affine
// isometries (B, b): B a diagonal +-1 matrix, b a half-integer translation
// stored doubled, so composition (B,b)(C,c) = (BC, Bc + b) never leaves the
// integers. HW data lists the n generators beta_i (n odd, B_i = diag with +1
// only at (i,i), doubled translations in {0,1}); on top of that sit the
// validation checks, the torsion certificate, and the constructive surjection
// Phi: G_{n-1} ->> Gamma with its certificate (permutation product P with
// P^2 = +-e_n and an explicit word expressing beta_n over beta_1..beta_{n-1}).

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "uprod/chw.hpp"
#include "uprod/common.hpp"
#include "uprod/word.hpp"

namespace uprod {

struct AffineIsometry {
  std::vector<int> diag;                // entries +-1
  std::vector<long long> translation2;  // doubled translation, 2b
  int n() const { return static_cast<int>(diag.size()); }
  bool is_identity() const;
  bool is_pure_translation() const;
  bool operator==(const AffineIsometry&) const = default;
};

AffineIsometry affine_identity(int n);
// (B,b)(C,c) = (BC, Bc + b), exact in doubled integers.
AffineIsometry compose(const AffineIsometry& p, const AffineIsometry& q);
// (A,a)^-1 = (A^-1, -A^-1 a); diagonal +-1 matrices are involutions.
AffineIsometry inverse(const AffineIsometry& p);
AffineIsometry affine_power(const AffineIsometry& p, long long k);
std::string affine_to_string(const AffineIsometry& p);

// HW generator data: only the doubled translation rows are stored; the
// linear parts are implied by the dimension.
struct HWData {
  int n = 0;
  std::vector<std::vector<long long>> b2;  // b2[i-1] is the doubled row of beta_i
  AffineIsometry generator(int i) const;   // beta_i, 1-based
};

HWData hw_from_json_text(const std::string& text);
std::string hw_to_json_text(const HWData& data);
HWData hw_load_file(const std::string& path);

struct ValidationCheck {
  std::string name;
  bool ok = false;
  std::string detail;
};

struct ValidationReport {
  bool valid = false;
  std::vector<ValidationCheck> checks;
  std::string first_failure() const;
};

// Runs, in order: dimension odd, entries in {0,1}, beta_i^2 = e_i, the G_n
// relators, lattice closure (beta_1...beta_n lands in the integer lattice),
// the odd-parity condition on column n over I = {1..n-1}, and absence of a
// torsion witness. Later checks are skipped when the shape checks fail.
ValidationReport validate_hw(const HWData& data);

struct TorsionWitness {
  std::vector<int> product_word;  // ascending generator indices
  AffineIsometry witness;         // the finite-order element itself
};

// Scans every nonidentity holonomy element (all proper nonempty generator
// subsets, covering both coset expressions); a coset contains torsion iff
// the +1-eigenspace coordinates of its translation are integers.
std::optional<TorsionWitness> torsion_witness(const HWData& data);

// P = beta_{pi(1)} ... beta_{pi(n-1)} for a permutation pi of {1..n-1}.
AffineIsometry permutation_product(const HWData& data, const std::vector<int>& pi);

struct SurjectionCertificate {
  std::vector<int> permutation;  // pi, the set J listed first
  AffineIsometry p;              // the permutation product
  int sign = 0;                  // P^2 = sign * e_n
  GeneratorWord beta_n_word;     // word over beta_1..beta_{n-1} equal to beta_n
};

// Builds and verifies the surjection certificate; throws if validation or
// the parity condition fails.
SurjectionCertificate surjection_certificate(const HWData& data);

// Phi(x_i) = beta_i evaluated on a G_{n-1} normal form.
AffineIsometry phi_evaluate(const HWData& data, const GnElement& g);

// Exhaustive scan of the 2^6 diagonal-constrained {0,1} translation tables
// in dimension 3; returns every datum that passes validate_hw.
std::vector<HWData> enumerate_valid_dimension3();

}  // namespace uprod
