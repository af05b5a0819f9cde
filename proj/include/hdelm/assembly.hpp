#pragma once

#include <variant>
#include <vector>

#include "hdelm/features.hpp"
#include "hdelm/geometry.hpp"
#include "hdelm/problems.hpp"

namespace hdelm {

enum class RowKind { pde, boundary, initial, continuity0, continuity1 };

const char* row_kind_name(RowKind kind);

/// Contiguous run of rows of one kind. `subdomain` is the owning sub-domain
/// (for continuity rows: the lower-ID side) and `interface` the index into
/// Decomposition::interfaces for continuity rows (-1 otherwise).
struct RowBlock {
  RowKind kind = RowKind::pde;
  int subdomain = 0;
  Index begin = 0;
  Index count = 0;
  int interface = -1;
};

/// Coefficients of sub-domain `subdomain` occupy phi[begin, begin + count).
struct ColumnBlock {
  int subdomain = 0;
  Index begin = 0;
  Index count = 0;
};

struct AssembleOptions {
  int continuity_order = 1;     // 0: C0 only, 1: C0 and normal-derivative rows
  double condition_scale = 1.0; // uniform weight on boundary/initial/continuity rows
  Index chunk_rows = 256;       // points per feature evaluation block
};

struct LinearSystem {
  Matrix matrix;
  Vector rhs;
  std::vector<RowBlock> row_blocks;
  std::vector<ColumnBlock> column_blocks;

  Index rows() const { return matrix.rows(); }
  Index cols() const { return matrix.cols(); }
  Index count(RowKind kind) const;
};

/// R(phi) = A phi - b + mu N(u, grad u, lap u) on the PDE rows, with
/// u = u0 + V phi (and likewise for the gradient and Laplacian); u0 is zero
/// for plain ELM and the projected boundary data for A-TFC.
class NonlinearSystem {
 public:
  struct PdeData {
    std::vector<Index> rows;  // system row of each PDE point
    PointBlock points;
    Matrix v;                 // n_pde x n_dof
    std::vector<Matrix> grad; // spatial_dim blocks, n_pde x n_dof
    Matrix lap;               // n_pde x n_dof
    Vector u0;                // n_pde
    Matrix grad0;             // n_pde x spatial_dim
    Vector lap0;              // n_pde
  };

  NonlinearSystem(LinearSystem linear, PdeData pde, NonlinearTerm term);

  Vector residual(const Vector& phi) const;
  Matrix jacobian(const Vector& phi) const;

  const LinearSystem& linear_part() const { return linear_; }
  const std::vector<RowBlock>& row_blocks() const { return linear_.row_blocks; }
  const std::vector<ColumnBlock>& column_blocks() const { return linear_.column_blocks; }
  Index rows() const { return linear_.rows(); }
  Index cols() const { return linear_.cols(); }

 private:
  struct States {
    Vector u, lap;
    Matrix grad;
  };
  States states(const Vector& phi) const;

  LinearSystem linear_;
  PdeData pde_;
  NonlinearTerm term_;
};

using AssembledSystem = std::variant<LinearSystem, NonlinearSystem>;

/// Plain ELM on the whole domain: PDE rows at interior and condition points,
/// Dirichlet rows at spatial-face points, then at initial points.
AssembledSystem assemble_elm(const PdeProblem& problem, const FeatureLayer& layer, const CollocationSet& colloc,
                             const AssembleOptions& options = {});

/// locELM: one layer and one face-aligned collocation set per sub-domain.
/// Rows are grouped per sub-domain (PDE, boundary, initial), followed by the
/// continuity rows of each interface. With one sub-domain this equals the
/// global assembly.
AssembledSystem assemble_elm(const PdeProblem& problem, const Decomposition& decomposition,
                             const std::vector<FeatureLayer>& layers, const std::vector<CollocationSet>& colloc,
                             const AssembleOptions& options = {});

/// ELM with A-TFC: basis V - A V, PDE rhs Q - L A H, boundary rows from mismatch_rows.
AssembledSystem assemble_atfc(const PdeProblem& problem, const FeatureLayer& layer, const CollocationSet& colloc,
                              const AssembleOptions& options = {});

}  // namespace hdelm
