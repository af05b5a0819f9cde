#include "hdelm/assembly.hpp"

#include <algorithm>
#include <string>

#include "hdelm/atfc.hpp"
#include "hdelm/errors.hpp"

namespace hdelm {

const char* row_kind_name(RowKind kind) {
  switch (kind) {
    case RowKind::pde: return "pde";
    case RowKind::boundary: return "boundary";
    case RowKind::initial: return "initial";
    case RowKind::continuity0: return "continuity0";
    case RowKind::continuity1: return "continuity1";
  }
  return "?";
}

Index LinearSystem::count(RowKind kind) const {
  Index n = 0;
  for (const auto& b : row_blocks)
    if (b.kind == kind) n += b.count;
  return n;
}

NonlinearSystem::NonlinearSystem(LinearSystem linear, PdeData pde, NonlinearTerm term)
    : linear_(std::move(linear)), pde_(std::move(pde)), term_(std::move(term)) {
  if (!term_.value || !term_.partials) throw InvalidArgument("nonlinear term needs value and partials");
}

NonlinearSystem::States NonlinearSystem::states(const Vector& phi) const {
  if (phi.size() != cols()) throw InvalidArgument("nonlinear system: coefficient length mismatch");
  States s;
  s.u = pde_.u0 + pde_.v * phi;
  s.lap = pde_.lap0 + pde_.lap * phi;
  s.grad = pde_.grad0;
  for (std::size_t k = 0; k < pde_.grad.size(); ++k) s.grad.col(static_cast<Index>(k)) += pde_.grad[k] * phi;
  return s;
}

namespace {

NonlinearState state_at(const PointBlock& points, const Vector& u, const Matrix& grad_rowmajor_src,
                        std::vector<double>& grad_buf, const Vector& lap, Index i) {
  for (Index k = 0; k < grad_rowmajor_src.cols(); ++k) grad_buf[static_cast<std::size_t>(k)] = grad_rowmajor_src(i, k);
  return NonlinearState{std::span<const double>(points.row(i).data(), points.cols()), u(i), grad_buf, lap(i)};
}

}  // namespace

Vector NonlinearSystem::residual(const Vector& phi) const {
  const States s = states(phi);
  Vector r = linear_.matrix * phi - linear_.rhs;
  std::vector<double> g(static_cast<std::size_t>(s.grad.cols()));
  for (std::size_t i = 0; i < pde_.rows.size(); ++i) {
    const auto st = state_at(pde_.points, s.u, s.grad, g, s.lap, static_cast<Index>(i));
    r(pde_.rows[i]) += term_.mu * term_.value(st);
  }
  return r;
}

Matrix NonlinearSystem::jacobian(const Vector& phi) const {
  const States s = states(phi);
  const Index n = static_cast<Index>(pde_.rows.size());
  const int dim = static_cast<int>(pde_.grad.size());
  Vector du(n), dlap(n);
  Matrix dgrad = Matrix::Zero(n, dim);
  std::vector<double> g(static_cast<std::size_t>(dim));
  for (Index i = 0; i < n; ++i) {
    const auto p = term_.partials(state_at(pde_.points, s.u, s.grad, g, s.lap, i));
    du(i) = term_.mu * p.d_u;
    dlap(i) = term_.mu * p.d_lap;
    if (!p.d_grad.empty()) {
      if (static_cast<int>(p.d_grad.size()) != dim) throw InvalidArgument("nonlinear partials: gradient size mismatch");
      for (int k = 0; k < dim; ++k) dgrad(i, k) = term_.mu * p.d_grad[static_cast<std::size_t>(k)];
    }
  }
  Matrix extra = du.asDiagonal() * pde_.v;
  extra.noalias() += dlap.asDiagonal() * pde_.lap;
  for (int k = 0; k < dim; ++k) extra.noalias() += dgrad.col(k).asDiagonal() * pde_.grad[static_cast<std::size_t>(k)];
  Matrix jac = linear_.matrix;
  for (Index i = 0; i < n; ++i) jac.row(pde_.rows[static_cast<std::size_t>(i)]) += extra.row(i);
  return jac;
}

namespace {

struct Part {
  const FeatureLayer* layer;
  const CollocationSet* colloc;
  const BoxDomain* box;
  Index col_begin;
};

class Builder {
 public:
  Builder(const PdeProblem& problem, bool atfc, Index n_rows, Index n_dof, Index n_pde, const AssembleOptions& options)
      : problem_(problem), atfc_(atfc), options_(options), order_(problem.required_order()),
        nonlinear_(problem.nonlinear.has_value()) {
    sys_.matrix = Matrix::Zero(n_rows, n_dof);
    sys_.rhs = Vector::Zero(n_rows);
    if (nonlinear_) {
      const int dim = problem.domain.d();
      pde_.points = PointBlock(n_pde, problem.domain.dim_total());
      pde_.v = Matrix::Zero(n_pde, n_dof);
      pde_.grad.assign(static_cast<std::size_t>(dim), Matrix::Zero(n_pde, n_dof));
      pde_.lap = Matrix::Zero(n_pde, n_dof);
      pde_.u0 = Vector::Zero(n_pde);
      pde_.grad0 = Matrix::Zero(n_pde, dim);
      pde_.lap0 = Vector::Zero(n_pde);
      pde_.rows.reserve(static_cast<std::size_t>(n_pde));
    }
  }

  void add_columns(int sub, Index begin, Index count) { sys_.column_blocks.push_back({sub, begin, count}); }

  void add_pde(int sub, const Part& part, const PointBlock& pts) {
    const Index n = pts.rows();
    const int dim = problem_.domain.d();
    const Index m = part.layer->width();
    for (Index b = 0; b < n; b += chunk()) {
      const Index cnt = std::min(chunk(), n - b);
      const PointBlock p = pts.middleRows(b, cnt);
      const FeatureEval fe = atfc_ ? constrained_features(*part.layer, problem_.domain, p, order_)
                                   : eval_features(*part.layer, p, order_);
      sys_.matrix.block(cursor_ + b, part.col_begin, cnt, m) = apply_linear(problem_.linear, fe);
      FeatureEval proj;
      if (atfc_) proj = project_boundary_data(problem_, p, order_);
      for (Index r = 0; r < cnt; ++r)
        sys_.rhs(cursor_ + b + r) = problem_.forcing(std::span<const double>(p.row(r).data(), p.cols()));
      if (atfc_) sys_.rhs.segment(cursor_ + b, cnt) -= apply_linear(problem_.linear, proj).col(0);

      if (nonlinear_) {
        const Index row0 = pde_count_;
        pde_.points.middleRows(row0, cnt) = p;
        pde_.v.block(row0, part.col_begin, cnt, m) = fe.values;
        for (int k = 0; k < dim; ++k) {
          pde_.grad[static_cast<std::size_t>(k)].block(row0, part.col_begin, cnt, m) = fe.grad[static_cast<std::size_t>(k)];
          pde_.lap.block(row0, part.col_begin, cnt, m) += fe.diag2[static_cast<std::size_t>(k)];
        }
        if (atfc_) {
          pde_.u0.segment(row0, cnt) = proj.values.col(0);
          for (int k = 0; k < dim; ++k) {
            pde_.grad0.block(row0, k, cnt, 1) = proj.grad[static_cast<std::size_t>(k)];
            pde_.lap0.segment(row0, cnt) += proj.diag2[static_cast<std::size_t>(k)].col(0);
          }
        }
        for (Index r = 0; r < cnt; ++r) pde_.rows.push_back(cursor_ + b + r);
        pde_count_ += cnt;
      }
    }
    close_block(RowKind::pde, sub, n);
  }

  void add_dirichlet(RowKind kind, int sub, const Part& part, const PointBlock& pts) {
    const Index n = pts.rows();
    if (n == 0) return;
    const Index m = part.layer->width();
    const double w = options_.condition_scale;
    for (Index b = 0; b < n; b += chunk()) {
      const Index cnt = std::min(chunk(), n - b);
      const PointBlock p = pts.middleRows(b, cnt);
      if (atfc_) {
        const MismatchRows mm = mismatch_rows(*part.layer, problem_, p);
        sys_.matrix.block(cursor_ + b, part.col_begin, cnt, m) = w * mm.rows;
        sys_.rhs.segment(cursor_ + b, cnt) = w * mm.rhs;
      } else {
        sys_.matrix.block(cursor_ + b, part.col_begin, cnt, m) = w * eval_values(*part.layer, p);
        for (Index r = 0; r < cnt; ++r)
          sys_.rhs(cursor_ + b + r) = w * problem_.boundary(std::span<const double>(p.row(r).data(), p.cols()));
      }
    }
    close_block(kind, sub, n);
  }

  void add_continuity(int order, int iface, const Interface& in, const Part& lower, const Part& higher,
                      const PointBlock& pts) {
    const Index n = pts.rows();
    if (n == 0) return;
    const double w = options_.condition_scale;
    for (Index b = 0; b < n; b += chunk()) {
      const Index cnt = std::min(chunk(), n - b);
      const PointBlock p = pts.middleRows(b, cnt);
      const FeatureEval lo = eval_features(*lower.layer, p, order);
      const FeatureEval hi = eval_features(*higher.layer, p, order);
      const Matrix& vl = order == 0 ? lo.values : lo.grad[static_cast<std::size_t>(in.direction)];
      const Matrix& vh = order == 0 ? hi.values : hi.grad[static_cast<std::size_t>(in.direction)];
      sys_.matrix.block(cursor_ + b, lower.col_begin, cnt, vl.cols()) = w * vl;
      sys_.matrix.block(cursor_ + b, higher.col_begin, cnt, vh.cols()) = -w * vh;
    }
    close_block(order == 0 ? RowKind::continuity0 : RowKind::continuity1, in.lower, n, iface);
  }

  AssembledSystem finish() {
    if (cursor_ != sys_.matrix.rows()) throw std::logic_error("assembly: row count bookkeeping mismatch");
    if (!nonlinear_) return std::move(sys_);
    if (!problem_.nonlinear->partials) throw InvalidArgument("assembly: nonlinear term lacks partials");
    return NonlinearSystem(std::move(sys_), std::move(pde_), *problem_.nonlinear);
  }

 private:
  Index chunk() const { return std::max<Index>(1, options_.chunk_rows); }
  void close_block(RowKind kind, int sub, Index n, int iface = -1) {
    if (n == 0) return;
    sys_.row_blocks.push_back({kind, sub, cursor_, n, iface});
    cursor_ += n;
  }

  const PdeProblem& problem_;
  bool atfc_;
  AssembleOptions options_;
  int order_;
  bool nonlinear_;
  LinearSystem sys_;
  NonlinearSystem::PdeData pde_;
  Index cursor_ = 0;
  Index pde_count_ = 0;
};

void check_common(const PdeProblem& problem, const AssembleOptions& options) {
  problem.validate();
  if (problem.nonlinear && !problem.nonlinear->partials)
    throw InvalidArgument("assembly: nonlinear term lacks partials");
  if (options.continuity_order < 0 || options.continuity_order > 1)
    throw InvalidArgument("assembly: continuity_order must be 0 or 1");
}

bool on_parent_face(const BoxDomain& box, const BoxDomain& parent, int dir, Side side) {
  return side == Side::low ? box.lo(dir) == parent.lo(dir) : box.hi(dir) == parent.hi(dir);
}

void check_set(const BoxDomain& domain, const FeatureLayer& layer, const CollocationSet& c) {
  if (layer.dim_total() != domain.dim_total()) throw InvalidArgument("assembly: layer dimension does not match domain");
  if (static_cast<int>(c.faces.size()) != 2 * domain.d())
    throw InvalidArgument("assembly: collocation set has the wrong number of faces");
  if (!domain.time_dependent() && c.n_t0() > 0)
    throw InvalidArgument("assembly: initial points on a stationary problem");
}

}  // namespace

AssembledSystem assemble_elm(const PdeProblem& problem, const Decomposition& dec,
                             const std::vector<FeatureLayer>& layers, const std::vector<CollocationSet>& colloc,
                             const AssembleOptions& options) {
  check_common(problem, options);
  const int n_sub = dec.size();
  if (static_cast<int>(layers.size()) != n_sub || static_cast<int>(colloc.size()) != n_sub)
    throw InvalidArgument("assemble_elm: need one layer and one collocation set per sub-domain");
  if (dec.parent.dim_total() != problem.domain.dim_total() || dec.parent.lo() != problem.domain.lo() ||
      dec.parent.hi() != problem.domain.hi())
    throw InvalidArgument("assemble_elm: decomposition parent differs from the problem domain");
  if (n_sub > 1 && problem.linear.c_third != 0.0 && options.continuity_order >= 1)
    throw UnsupportedConfiguration("assemble_elm: third-order operators need C2 interface continuity");

  std::vector<Part> parts;
  Index n_dof = 0, n_rows = 0, n_pde = 0;
  for (int i = 0; i < n_sub; ++i) {
    check_set(dec.boxes[i], layers[i], colloc[i]);
    parts.push_back({&layers[i], &colloc[i], &dec.boxes[i], n_dof});
    n_dof += layers[i].width();
    const Index pde = colloc[i].all_points().rows();
    n_pde += pde;
    n_rows += pde + colloc[i].n_t0();
    for (int dir = 0; dir < dec.parent.d(); ++dir)
      for (Side side : {Side::low, Side::high})
        if (on_parent_face(dec.boxes[i], dec.parent, dir, side)) n_rows += colloc[i].faces[face_index(dir, side)].rows();
  }
  for (const auto& in : dec.interfaces) {
    const PointBlock& a = colloc[in.lower].faces[face_index(in.direction, Side::high)];
    const PointBlock& b = colloc[in.higher].faces[face_index(in.direction, Side::low)];
    if (a.rows() != b.rows() || a.cols() != b.cols() || a != b)
      throw InvalidArgument("assemble_elm: interface " + std::to_string(in.lower) + "/" + std::to_string(in.higher) +
                            " is not aligned");
    n_rows += (options.continuity_order + 1) * a.rows();
  }

  Builder builder(problem, false, n_rows, n_dof, n_pde, options);
  for (int i = 0; i < n_sub; ++i) {
    builder.add_columns(i, parts[i].col_begin, layers[i].width());
    builder.add_pde(i, parts[i], colloc[i].all_points());
    for (int dir = 0; dir < dec.parent.d(); ++dir)
      for (Side side : {Side::low, Side::high})
        if (on_parent_face(dec.boxes[i], dec.parent, dir, side))
          builder.add_dirichlet(RowKind::boundary, i, parts[i], colloc[i].faces[face_index(dir, side)]);
    builder.add_dirichlet(RowKind::initial, i, parts[i], colloc[i].initial);
  }
  for (std::size_t f = 0; f < dec.interfaces.size(); ++f) {
    const auto& in = dec.interfaces[f];
    const PointBlock& z = colloc[in.lower].faces[face_index(in.direction, Side::high)];
    for (int c = 0; c <= options.continuity_order; ++c)
      builder.add_continuity(c, static_cast<int>(f), in, parts[in.lower], parts[in.higher], z);
  }
  return builder.finish();
}

AssembledSystem assemble_elm(const PdeProblem& problem, const FeatureLayer& layer, const CollocationSet& colloc,
                             const AssembleOptions& options) {
  const Decomposition dec = decompose(problem.domain, {}, {});
  return assemble_elm(problem, dec, std::vector<FeatureLayer>{layer}, std::vector<CollocationSet>{colloc}, options);
}

AssembledSystem assemble_atfc(const PdeProblem& problem, const FeatureLayer& layer, const CollocationSet& colloc,
                              const AssembleOptions& options) {
  check_common(problem, options);
  check_set(problem.domain, layer, colloc);
  const PointBlock pde_points = colloc.all_points();
  const Index n_cond = colloc.n_bc_total();
  Builder builder(problem, true, pde_points.rows() + n_cond, layer.width(), pde_points.rows(), options);
  const Part part{&layer, &colloc, &problem.domain, 0};
  builder.add_columns(0, 0, layer.width());
  builder.add_pde(0, part, pde_points);
  std::vector<PointBlock> faces(colloc.faces.begin(), colloc.faces.end());
  builder.add_dirichlet(RowKind::boundary, 0, part, stack(faces));
  builder.add_dirichlet(RowKind::initial, 0, part, colloc.initial);
  return builder.finish();
}

}  // namespace hdelm
