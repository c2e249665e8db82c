#include "surfelastic/energy.hpp"

#include <ceres/jet.h>

#include <cmath>

namespace surfelastic {

namespace {

using Jet12 = ceres::Jet<double, 12>;
using JetMat32 = Eigen::Matrix<Jet12, 3, 2>;

// Storage order of a 3x2 within a OneForm row: entry (r,c) at 3c + r.
JetMat32 seed_pair(const Eigen::Ref<const Eigen::Matrix<double, 1, 6>>& a,
                   const Eigen::Ref<const Eigen::Matrix<double, 1, 6>>& xi,
                   JetMat32& xi_out) {
  JetMat32 aj;
  for (int c = 0; c < 2; ++c)
    for (int r = 0; r < 3; ++r) {
      aj(r, c) = Jet12(a[3 * c + r], 3 * c + r);
      xi_out(r, c) = Jet12(xi[3 * c + r], 6 + 3 * c + r);
    }
  return aj;
}

struct ResampleRecord {
  // Per-point chain pieces for d(node0)/d(xv).
  Field3 d_theta;   // interpolant derivative wrt theta
  Field3 d_phi;     // interpolant derivative wrt phi
  Field3 gamma;     // unit image points
  ScalarField wnorm;  // |Id + U|
};

}  // namespace

PathEnergyModel::PathEnergyModel(MetricWeights w, const SphericalGrid& grid,
                                 const HarmonicBasis* sbasis,
                                 const VectorFieldBasis* vbasis, Field3 f_bar,
                                 Field3 f_interior, Field3 f_end, int T,
                                 EnergyOptions opts, EnergyVariables vars)
    : w_(w),
      grid_(grid),
      sbasis_(sbasis),
      vbasis_(vbasis),
      f_bar_(std::move(f_bar)),
      f_interior_(std::move(f_interior)),
      f_end_(std::move(f_end)),
      T_(T),
      opts_(opts),
      vars_(vars) {
  w_.validate();
  if (T_ < 1) throw ValidationError("energy: T must be at least 1");
  if (vars_.coeff && T_ >= 2 && !sbasis_)
    throw ValidationError("energy: Coeff variables need a surface basis");
  if (vars_.gamma && !vbasis_)
    throw ValidationError("energy: gamma variables need a vector field basis");
  n_xv_ = vars_.gamma ? vbasis_->count : 0;
  n_coeff_ = (vars_.coeff && T_ >= 2) ? sbasis_->count() * (T_ - 1) : 0;
  n_rot_ = vars_.rotation ? 3 : 0;
}

int PathEnergyModel::dimension() const { return n_xv_ + n_coeff_ + n_rot_; }

int PathEnergyModel::coeff_rows() const {
  return sbasis_ ? sbasis_->count() : 0;
}

Eigen::VectorXd PathEnergyModel::xv_of(const Eigen::VectorXd& x) const {
  return x.head(n_xv_);
}

Eigen::MatrixXd PathEnergyModel::coeff_of(const Eigen::VectorXd& x) const {
  if (n_coeff_ == 0) return Eigen::MatrixXd::Zero(coeff_rows(), T_ - 1);
  return Eigen::Map<const Eigen::MatrixXd>(x.data() + n_xv_, coeff_rows(),
                                           T_ - 1);
}

Vec3 PathEnergyModel::rot_of(const Eigen::VectorXd& x) const {
  if (n_rot_ == 0) return Vec3::Zero();
  return x.segment<3>(n_xv_ + n_coeff_);
}

Eigen::VectorXd PathEnergyModel::pack(const Eigen::VectorXd& xv,
                                      const Eigen::MatrixXd& coeff,
                                      const Vec3& rot) const {
  Eigen::VectorXd x(dimension());
  if (n_xv_ > 0) x.head(n_xv_) = xv;
  if (n_coeff_ > 0)
    x.segment(n_xv_, n_coeff_) =
        Eigen::Map<const Eigen::VectorXd>(coeff.data(), n_coeff_);
  if (n_rot_ > 0) x.segment<3>(n_xv_ + n_coeff_) = rot;
  return x;
}

DiscretePath PathEnergyModel::path_at(const Eigen::VectorXd& x) const {
  DiscretePath p;
  p.T = T_;
  p.f.resize(T_ + 1);

  Field3 node0 = f_bar_;
  if (vars_.gamma) {
    DiffeoCoefficients dc{xv_of(x), vbasis_};
    node0 = resample(grid_, f_bar_, build_map(grid_, dc));
  }
  Field3 end = f_end_;
  if (vars_.rotation) end = f_end_ * exp_so3(rot_of(x)).transpose();
  const Field3& interior =
      opts_.interior_from_fbar ? node0 : f_interior_;

  p.f[0] = node0;
  p.f[T_] = end;
  Eigen::MatrixXd coeff = coeff_of(x);
  if (n_coeff_ > 0) p.coeff = coeff;
  for (int i = 1; i < T_; ++i) {
    double t = double(i) / T_;
    p.f[i] = (1.0 - t) * interior + t * end;
    if (n_coeff_ > 0) sbasis_->accumulate(coeff.col(i - 1), p.f[i]);
  }
  return p;
}

double PathEnergyModel::value(const Eigen::VectorXd& x) const {
  return evaluate(x, nullptr);
}

double PathEnergyModel::value_and_gradient(const Eigen::VectorXd& x,
                                           Eigen::VectorXd& grad) const {
  grad.resize(dimension());
  return evaluate(x, &grad);
}

double PathEnergyModel::evaluate(const Eigen::VectorXd& x,
                                 Eigen::VectorXd* grad) const {
  if (x.size() != dimension())
    throw ValidationError("energy: packed variable size mismatch");
  const int P = grid_.points();
  const double dt = 1.0 / T_;

  // ---- Forward pass: build the nodes.
  Field3 node0 = f_bar_;
  ResampleRecord rec;
  Mat3 rot_mat = Mat3::Identity();
  if (vars_.gamma) {
    DiffeoCoefficients dc{xv_of(x), vbasis_};
    SphereMap map = build_map(grid_, dc);
    SurfaceSampler sampler(grid_, f_bar_);
    node0.resize(P, 3);
    if (grad) {
      rec.d_theta.resize(P, 3);
      rec.d_phi.resize(P, 3);
      rec.gamma = map.gamma;
      rec.wnorm.resize(P);
      TangentField tf = assemble_field(*vbasis_, dc.xv);
      for (int i = 0; i < grid_.n_phi; ++i)
        for (int j = 0; j < grid_.n_theta; ++j) {
          int p = grid_.index(i, j);
          Vec3 wv = grid_.e1(i, j) +
                    tf.u[p] * grid_.e2(i, j) + tf.v[p] * grid_.e3(i, j);
          rec.wnorm[p] = wv.norm();
        }
    }
    for (int p = 0; p < P; ++p) {
      double th, ph;
      unit_to_angles(map.gamma.row(p).transpose(), th, ph);
      if (grad) {
        Vec3 val, dth, dph;
        sampler.value_and_jacobian(th, ph, val, dth, dph);
        node0.row(p) = val.transpose();
        rec.d_theta.row(p) = dth.transpose();
        rec.d_phi.row(p) = dph.transpose();
      } else {
        node0.row(p) = sampler.value(th, ph).transpose();
      }
    }
  }

  Field3 end = f_end_;
  if (vars_.rotation) {
    rot_mat = exp_so3(rot_of(x));
    end = f_end_ * rot_mat.transpose();
  }
  const Field3& interior = opts_.interior_from_fbar ? node0 : f_interior_;

  std::vector<Field3> nodes(T_ + 1);
  nodes[0] = node0;
  nodes[T_] = end;
  Eigen::MatrixXd coeff = coeff_of(x);
  for (int i = 1; i < T_; ++i) {
    double t = double(i) / T_;
    nodes[i] = (1.0 - t) * interior + t * end;
    if (n_coeff_ > 0) sbasis_->accumulate(coeff.col(i - 1), nodes[i]);
  }

  // Differentials of all nodes.
  std::vector<OneForm> forms(T_ + 1);
  for (int i = 0; i <= T_; ++i) forms[i] = differential(grid_, nodes[i]);

  // ---- Energy terms. Each term has a base node b and a velocity that is
  // a linear combination of node differentials.
  struct Term {
    int base;
    int va, vb;     // velocity = (forms[va] - forms[vb]) * vscale
    double vscale;
    double wq;      // quadrature factor
  };
  std::vector<Term> terms;
  if (opts_.mode == DerivativeMode::kForward) {
    for (int i = 1; i <= T_; ++i)
      terms.push_back({i - 1, i, i - 1, 1.0 / dt, 1.0});
  } else {
    terms.push_back({0, 1, 0, 1.0 / dt, 0.5});
    for (int i = 1; i < T_; ++i)
      terms.push_back({i, i + 1, i - 1, 0.5 / dt, 1.0});
    terms.push_back({T_, T_, T_ - 1, 1.0 / dt, 0.5});
  }

  std::vector<Eigen::Matrix<double, Eigen::Dynamic, 6>> cot;
  if (grad) {
    cot.assign(T_ + 1, Eigen::Matrix<double, Eigen::Dynamic, 6>::Zero(P, 6));
  }

  double energy = 0.0;
  for (const Term& t : terms) {
    // Rank tolerance relative to the mean Gram determinant of the base.
    ScalarField det = gram_determinant(grid_, forms[t.base]);
    const double tol = kRankTolRel * det.mean();
    double term_sum = 0.0;
    for (int p = 0; p < P; ++p) {
      if (!(det[p] > tol)) {
        throw RankDeficiencyError(
            "energy: rank-deficient surface at time step " +
                std::to_string(t.base) + ", phi row " +
                std::to_string(p / grid_.n_theta) + ", theta column " +
                std::to_string(p % grid_.n_theta),
            p / grid_.n_theta, p % grid_.n_theta);
      }
      const double wp = grid_.row_weight[p / grid_.n_theta];
      Eigen::Matrix<double, 1, 6> xi_row =
          (forms[t.va].m.row(p) - forms[t.vb].m.row(p)) * t.vscale;
      if (grad) {
        JetMat32 xij;
        JetMat32 aj = seed_pair(forms[t.base].m.row(p), xi_row, xij);
        Jet12 k = split_kernel<Jet12>(w_, aj, xij);
        term_sum += wp * k.a;
        const double cw = t.wq * dt * wp;
        for (int e = 0; e < 6; ++e) {
          cot[t.base](p, e) += cw * k.v[e];
          const double gxi = cw * k.v[6 + e] * t.vscale;
          cot[t.va](p, e) += gxi;
          cot[t.vb](p, e) -= gxi;
        }
      } else {
        Mat32 a, xi;
        for (int c = 0; c < 2; ++c)
          for (int r = 0; r < 3; ++r) {
            a(r, c) = forms[t.base].m(p, 3 * c + r);
            xi(r, c) = xi_row[3 * c + r];
          }
        term_sum += wp * split_kernel<double>(w_, a, xi);
      }
    }
    energy += t.wq * dt * term_sum;
  }
  if (!grad) return energy;

  // ---- Backward pass.
  grad->setZero();
  std::vector<Field3> node_cot(T_ + 1);
  for (int i = 0; i <= T_; ++i)
    node_cot[i] = differential_adjoint(grid_, OneForm{cot[i]});

  // Coefficients.
  if (n_coeff_ > 0) {
    Eigen::Map<Eigen::MatrixXd> gc(grad->data() + n_xv_, coeff_rows(),
                                   T_ - 1);
    for (int i = 1; i < T_; ++i) gc.col(i - 1) = sbasis_->project(node_cot[i]);
  }

  // Rotation: the end surface appears at node T and in every interior blend.
  if (vars_.rotation) {
    Field3 end_cot = node_cot[T_];
    for (int i = 1; i < T_; ++i) end_cot += (double(i) / T_) * node_cot[i];
    Vec3 v = Vec3::Zero();
    for (int p = 0; p < P; ++p)
      v += Vec3(end.row(p)).cross(Vec3(end_cot.row(p)));
    grad->segment<3>(n_xv_ + n_coeff_) =
        left_jacobian_so3(rot_of(x)).transpose() * v;
  }

  // Reparametrization: node 0 (plus the interior blend when configured).
  if (vars_.gamma) {
    Field3 start_cot = node_cot[0];
    if (opts_.interior_from_fbar)
      for (int i = 1; i < T_; ++i)
        start_cot += (1.0 - double(i) / T_) * node_cot[i];

    ScalarField s2(P), s3(P);
    for (int i = 0; i < grid_.n_phi; ++i)
      for (int j = 0; j < grid_.n_theta; ++j) {
        const int p = grid_.index(i, j);
        const Vec3 gm = rec.gamma.row(p).transpose();
        const double x2y2 = std::max(gm[0] * gm[0] + gm[1] * gm[1], 1e-24);
        const Vec3 dth_dg(-gm[1] / x2y2, gm[0] / x2y2, 0.0);
        const double sz = std::sqrt(std::max(1.0 - gm[2] * gm[2], 1e-24));
        const Vec3 dph_dg(0.0, 0.0, -1.0 / sz);
        const Vec3 c = start_cot.row(p).transpose();
        // c^T (d node0 / d gamma):
        const Vec3 cg = dth_dg * c.dot(rec.d_theta.row(p).transpose()) +
                        dph_dg * c.dot(rec.d_phi.row(p).transpose());
        // through the projection: (I - gamma gamma^T)/|W|
        const Vec3 cw = (cg - gm * gm.dot(cg)) / rec.wnorm[p];
        s2[p] = cw.dot(grid_.e2(i, j));
        s3[p] = cw.dot(grid_.e3(i, j));
      }
    grad->head(n_xv_) =
        vbasis_->u.transpose() * s2 + vbasis_->v.transpose() * s3;
  }

  return energy;
}

double energy_unparametrized(const MetricWeights& w, const SphericalGrid& grid,
                             const HarmonicBasis& sbasis,
                             const DiffeoCoefficients& coeffs,
                             const Field3& f1, const Field3& f2,
                             const Eigen::MatrixXd& coeff, int T,
                             EnergyOptions opts) {
  if (coeffs.xv.size() > 0) {
    double bound = step_bound(grid, coeffs);
    if (!(1.0 < bound))
      throw ValidationError(
          "energy_unparametrized: gamma not certified (step bound " +
          std::to_string(bound) + " <= 1)");
  }
  PathEnergyModel model(w, grid, &sbasis, coeffs.basis, f1, f1, f2, T, opts,
                        EnergyVariables{true, false, true});
  return model.value(model.pack(coeffs.xv, coeff, Vec3::Zero()));
}

double reparam_functional(const MetricWeights& w, const SphericalGrid& grid,
                          const DiffeoCoefficients& coeffs,
                          const Field3& f_bar, const Field3& f_next) {
  double bound = step_bound(grid, coeffs);
  if (!(1.0 < bound))
    throw ValidationError(
        "reparam_functional: gamma not certified (step bound " +
        std::to_string(bound) + " <= 1)");
  PathEnergyModel model(w, grid, nullptr, coeffs.basis, f_bar, f_bar, f_next,
                        1, EnergyOptions{},
                        EnergyVariables{true, false, false});
  return model.value(coeffs.xv);
}

double energy_rigid(const MetricWeights& w, const SphericalGrid& grid,
                    const HarmonicBasis& sbasis,
                    const DiffeoCoefficients& coeffs, const Field3& f1,
                    const Field3& f2, const Eigen::MatrixXd& coeff,
                    const RotationParams& rot, int T, EnergyOptions opts) {
  if (coeffs.xv.size() > 0) {
    double bound = step_bound(grid, coeffs);
    if (!(1.0 < bound))
      throw ValidationError("energy_rigid: gamma not certified (step bound " +
                            std::to_string(bound) + " <= 1)");
  }
  PathEnergyModel model(w, grid, &sbasis, coeffs.basis, f1, f1, f2, T, opts,
                        EnergyVariables{true, true, true});
  return model.value(model.pack(coeffs.xv, coeff, rot.r));
}

}  // namespace surfelastic
