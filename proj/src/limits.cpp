#include "kgfield/limits.hpp"

#include <cmath>

namespace kgfield {
namespace {

const cplx I(0.0, 1.0);

void check_ladder(const LimitSweep& s) {
  if (s.masses.size() < 4) throw PreconditionError("limit ladder needs at least 4 points");
  for (std::size_t i = 0; i < s.masses.size(); ++i) {
    if (!(s.masses[i] > 0.0)) throw PreconditionError("limit ladder masses must be positive");
    if (i > 0 && !(s.masses[i] > s.masses[i - 1]))
      throw PreconditionError("limit ladder masses must increase");
  }
}

template <class A, class B>
double rel_l2(const A& x, const B& y) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += std::norm(cplx(x[i]) - cplx(y[i]));
    den += std::norm(cplx(y[i]));
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

double l2(const CGrid& g) {
  double s = 0.0;
  for (const auto& v : g) s += std::norm(v);
  return std::sqrt(s);
}

} // namespace

SchrodingerReference schrodinger_reference(const LatticeField& field, double t) {
  const Lattice& L = field.lattice();
  const double M = field.params().mass();
  const FieldSamples c = field.coefficients_at(t);
  const CGrid psi = padded_grid(c.psi, L);
  SchrodingerReference r{dealiasing_lattice(L), RGrid(psi.size()), {}};
  for (std::size_t i = 0; i < psi.size(); ++i) r.rho[i] = std::norm(psi[i]);
  for (int ax = 0; ax < L.dim(); ++ax) {
    const CGrid d = padded_grid(derivative_coeffs(c.psi, L, ax), L);
    RGrid j(psi.size());
    for (std::size_t i = 0; i < j.size(); ++i)
      j[i] = (-I / (2.0 * M) * (std::conj(psi[i]) * d[i] - psi[i] * std::conj(d[i]))).real();
    r.j.push_back(std::move(j));
  }
  return r;
}

std::vector<double> LimitSweep::ladder(double m0, int count) {
  std::vector<double> m;
  for (int j = 0; j < count; ++j) m.push_back(m0 * std::ldexp(1.0, j));
  return m;
}

ModelParams limit_params(double mass, double a) { return {mass, 1.0 / (1.0 + a), a}; }

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw PreconditionError("fit_loglog_slope: need matching points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = double(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw PreconditionError("fit_loglog_slope: values must be positive");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

LimitRow limit_row(const LimitSweep& sweep, double M, CurrentChoice which, double a) {
  const ModelParams P = limit_params(M, a);
  if (std::abs(P.kappa() * (1.0 + a) - 1.0) > 1e-15) throw PreconditionError("kappa must equal 1/(1+a)");
  const LatticeField f = nonrelativistic_packet(sweep.lattice, P, sweep.profile);
  const double t = f.t0() + sweep.time_offset;
  const SchrodingerReference ref = schrodinger_reference(f, t);
  double rho_dev = 0.0, j_num = 0.0, j_den = 0.0;
  auto accumulate_j = [&](const auto& J) {
    for (std::size_t ax = 0; ax < ref.j.size(); ++ax)
      for (std::size_t i = 0; i < ref.j[ax].size(); ++i) {
        j_num += std::norm(cplx(J.components[ax + 1][i]) - ref.j[ax][i]);
        j_den += ref.j[ax][i] * ref.j[ax][i];
      }
  };
  if (which == CurrentChoice::Ja) {
    const ComplexCurrent J = current_Ja(f, t);
    rho_dev = rel_l2(J.components[0], ref.rho);
    accumulate_j(J);
  } else {
    const RealCurrent J = current_calJa(f, t);
    rho_dev = rel_l2(J.components[0], ref.rho);
    accumulate_j(J);
  }
  return {M, rho_dev, j_den > 0.0 ? std::sqrt(j_num / j_den) : std::sqrt(j_num)};
}

LimitTable limit_deviation(const LimitSweep& sweep, CurrentChoice which, double a) {
  check_ladder(sweep);
  LimitTable table;
  std::vector<double> ms, dr, dj;
  for (double M : sweep.masses) {
    const LimitRow row = limit_row(sweep, M, which, a);
    table.rows.push_back(row);
    ms.push_back(M);
    dr.push_back(row.rel_dev_rho);
    dj.push_back(row.rel_dev_j);
  }
  table.slope_rho = fit_loglog_slope(ms, dr);
  table.slope_j = fit_loglog_slope(ms, dj);
  return table;
}

const char* to_string(LadderQuantity q) {
  switch (q) {
    case LadderQuantity::operator_expansion: return "operator_expansion";
    case LadderQuantity::psi_c: return "psi_c";
    case LadderQuantity::psi_tilde: return "psi_tilde";
    case LadderQuantity::mutual_density: return "mutual_density";
    case LadderQuantity::chi_schrodinger: return "chi_schrodinger";
  }
  return "unknown";
}

LadderResult ladder_check(const LimitSweep& sweep, LadderQuantity q, double a) {
  check_ladder(sweep);
  const Lattice& L = sweep.lattice;
  const auto& k2 = L.k_squared();
  LadderResult r;
  for (double M : sweep.masses) {
    const ModelParams P = limit_params(M, a);
    double value = 0.0;
    switch (q) {
      case LadderQuantity::operator_expansion: {
        const CGrid phi = to_coeffs(gaussian_profile(L, sweep.profile), L);
        CGrid err(phi.size());
        for (std::size_t i = 0; i < phi.size(); ++i) {
          // (k^2+M^2)^{-1/2} - 1/M + k^2/(2M^3), summed as a binomial tail to avoid cancellation.
          const double x = k2[i] / (M * M);
          double tail = 0.0;
          if (x < 0.1) {
            double term = 1.0;
            for (int n = 1; n <= 30; ++n) {
              term *= (-0.5 - (n - 1)) / n * x;
              if (n >= 2) tail += term;
            }
          } else {
            tail = 1.0 / std::sqrt(1.0 + x) - 1.0 + 0.5 * x;
          }
          err[i] = tail / M * phi[i];
        }
        value = l2(to_grid(err, L)) * std::sqrt(L.cell_volume());
        break;
      }
      case LadderQuantity::psi_c:
      case LadderQuantity::psi_tilde: {
        const LatticeField f = nonrelativistic_packet(L, P, sweep.profile);
        const FieldSamples s = f.evaluate(f.t0());
        const CGrid c = apply_C(f).evaluate(f.t0()).psi;
        CGrid lhs(c.size()), rhs(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) {
          const double w = q == LadderQuantity::psi_c ? 0.0 : a;
          lhs[i] = c[i] + w * s.psi[i];
          rhs[i] = (1.0 + w) * s.psi[i];
        }
        value = rel_l2(lhs, rhs);
        break;
      }
      case LadderQuantity::mutual_density: {
        const LatticeField f = nonrelativistic_packet(L, P, sweep.profile);
        const double t = f.t0() + sweep.time_offset;
        value = rel_l2(current_Ja(f, t).components[0], current_calJa(f, t).components[0]);
        break;
      }
      case LadderQuantity::chi_schrodinger: {
        const LatticeField f = gaussian_packet(L, P, sweep.profile, +1);
        const double t = f.t0() + 0.25;
        const FieldSamples c = f.coefficients_at(t);
        // chi = e^{iMt} psi; i chi_t + lap chi/(2M) = e^{iMt}(i psidot - M psi + lap psi/(2M)).
        CGrid res(c.psi.size()), ref(c.psi.size());
        for (std::size_t i = 0; i < res.size(); ++i) {
          ref[i] = -k2[i] / (2.0 * M) * c.psi[i];
          res[i] = I * c.psidot[i] - M * c.psi[i] + ref[i];
        }
        value = l2(res) / l2(ref);
        break;
      }
    }
    r.masses.push_back(M);
    r.values.push_back(value);
  }
  r.slope = fit_loglog_slope(r.masses, r.values);
  return r;
}

} // namespace kgfield
