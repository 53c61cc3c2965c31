#pragma once

#include <memory>
#include <string>
#include <vector>

#include "phicurv/groebner.hpp"

namespace phicurv {

class QuotientRing;
using RingPtr = std::shared_ptr<const QuotientRing>;

// Matrix over the ring, stored as columns in R^rows.
struct Matrix {
  int rows = 0;
  std::vector<SVec> cols;

  int ncols() const { return static_cast<int>(cols.size()); }
  static Matrix zero(int rows, int ncols) {
    Matrix m;
    m.rows = rows;
    m.cols.assign(ncols, {});
    return m;
  }
  static Matrix identity(const PolyRing& R, int n);
};

Poly matrix_entry(const PolyRing& R, const Matrix& A, int i, int j);
Matrix matrix_from_entries(const PolyRing& R,
                           const std::vector<std::vector<Poly>>& rows);
Matrix matrix_transpose(const PolyRing& R, const Matrix& A);
Matrix matrix_multiply(const PolyRing& R, const Matrix& A, const Matrix& B);
// kron(A, I_n) and kron(I_n, A) block embeddings
Matrix kron_matrix_identity(const PolyRing& R, const Matrix& A, int n);
Matrix kron_identity_matrix(const PolyRing& R, int n, const Matrix& A);
Matrix matrix_concat(const Matrix& A, const Matrix& B);
bool matrix_is_zero(const Matrix& A);

// Standard-graded (or positively weighted) quotient ring F_p[x_1..x_n]/I,
// graded-local at m = (x_1..x_n). I is homogeneous for the declared weights
// and contains no non-zero constants.
class QuotientRing : public std::enable_shared_from_this<QuotientRing> {
 public:
  static RingPtr make(uint32_t p, std::vector<std::string> vars,
                      std::vector<Poly> ideal_gens,
                      std::vector<long> weights = {});
  static RingPtr make_from_strings(uint32_t p, std::vector<std::string> vars,
                                   const std::vector<std::string>& ideal_gens,
                                   std::vector<long> weights = {});

  const PolyRing& poly_ring() const { return base_; }
  const std::vector<Poly>& ideal_generators() const { return ideal_gens_; }
  const GroebnerBasis& ideal_gb() const { return ideal_gb_; }
  uint32_t p() const { return base_.p; }
  int nvars() const { return base_.nvars(); }

  int edim() const { return edim_; }
  int dim() const { return dim_; }
  bool is_regular() const { return edim_ == dim_; }
  bool is_artinian() const { return dim_ == 0; }
  int codim() const { return edim_ - dim_; }
  // Finite length of R itself when artinian.
  LengthResult ring_length() const;

  // Normal form modulo I.
  Poly nf(const Poly& f) const;
  SVec nf_vec(const SVec& v) const;
  Matrix nf_matrix(const Matrix& A) const;
  bool in_ideal(const Poly& f) const { return nf(f).is_zero(); }
  // Membership in m (no constant term) and in m^2 + I.
  bool in_max_ideal(const Poly& f) const;
  bool in_m2(const Poly& f) const;

  // Variables whose classes form a basis of m/m^2.
  std::vector<int> minimal_m_generator_indices() const;

  // Groebner basis over P of the span of `cols` in R^rank (I-multiples of
  // the frame adjoined).
  GroebnerBasis module_gb(const std::vector<SVec>& cols, int rank) const;
  // Generators of the syzygy module over R of `cols`.
  std::vector<SVec> syzygies_over(const std::vector<SVec>& cols,
                                  int rank) const;

  std::string description() const;

 private:
  QuotientRing() = default;
  PolyRing base_;
  std::vector<Poly> ideal_gens_;
  GroebnerBasis ideal_gb_;
  GroebnerBasis m2_gb_;  // GB of I + m^2
  int edim_ = 0, dim_ = 0;
};

inline bool same_ring(const RingPtr& a, const RingPtr& b) { return a == b; }

// Finitely presented module M = coker(rel : R^c -> R^frame).
struct FinModule {
  RingPtr ring;
  int frame = 0;
  std::vector<SVec> rel;  // relation columns in R^frame
  std::string label;

  static FinModule free_module(RingPtr R, int rank, std::string label = "");
  static FinModule ring_module(RingPtr R) {
    return free_module(std::move(R), 1, "R");
  }
  static FinModule residue_field(RingPtr R);
  static FinModule cokernel(RingPtr R, int frame, std::vector<SVec> rel,
                            std::string label = "");
};

// Cancels unit pivots until every relation entry lies in m; the result has
// frame equal to the minimal number of generators of M (as a module over
// the local ring at m).
FinModule minimal_presentation(const FinModule& M);

bool is_zero_module(const FinModule& M);
int minimal_generators(const FinModule& M);  // nu(M)
LengthResult module_length(const FinModule& M);

// Drops relation columns contained in the span of the others (columns
// sorted first, so presentations differing by a frame permutation prune to
// the same count).
FinModule prune_relations(const FinModule& M);

FinModule tensor_modules(const FinModule& M, const FinModule& N);

GroebnerBasis module_relations_gb(const FinModule& M);

// Prunes a generating set of a submodule of R^rank to an irredundant one:
// drops every vector lying in the span of the previously kept ones (plus
// I * frame). Vectors are sorted smallest-leading-term first, so graded
// inputs prune to a minimal generating set; the kept vectors are returned
// in reduced form.
std::vector<SVec> prune_span_generators(const QuotientRing& Q,
                                        std::vector<SVec> cols, int rank);

}  // namespace phicurv
