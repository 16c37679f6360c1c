// starfd - STAR-RIS assisted full-duplex link simulator and optimizer
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
//
// Path-following barrier method for programs mixing scalar box variables,
// Hermitian PSD blocks, log-of-affine objective terms and affine
// constraints. Equalities are handled by projected Newton steps; the KKT
// system is solved with a low-rank update (the only dense Hessian pieces
// are the per-block X^{-1} D X^{-1} maps, inverted in closed form) plus a
// Schur complement over the equality multipliers. Feasible interior points
// are produced by a phase-I margin-maximization run in shifted variables
// Y_b = X_b - u I, which accepts boundary or slightly infeasible hints.

#include "starfd/conic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace starfd::conic {

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kCoeffEps = 1e-300;
constexpr double kSyntheticBound = 1e9;

// ---------------------------------------------------------------------------
// Block-vector algebra
// ---------------------------------------------------------------------------

struct Vars {
    Eigen::VectorXd s;
    std::vector<Eigen::MatrixXcd> x;
};

Vars zeros_like(int n, const std::vector<int>& dims) {
    Vars v;
    v.s = Eigen::VectorXd::Zero(n);
    v.x.reserve(dims.size());
    for (int d : dims) v.x.emplace_back(Eigen::MatrixXcd::Zero(d, d));
    return v;
}

// Real inner product: a.s . b.s + sum_b Re Tr(a_b b_b) for Hermitian blocks.
double dot(const Vars& a, const Vars& b) {
    double r = a.s.dot(b.s);
    for (std::size_t i = 0; i < a.x.size(); ++i) {
        r += a.x[i].cwiseProduct(b.x[i].conjugate()).sum().real();
    }
    return r;
}

void axpy(Vars& y, double alpha, const Vars& v) {
    y.s += alpha * v.s;
    for (std::size_t i = 0; i < y.x.size(); ++i) y.x[i] += alpha * v.x[i];
}

// ---------------------------------------------------------------------------
// Normalized expression rows
// ---------------------------------------------------------------------------

struct Row {
    double constant = 0.0;
    Eigen::VectorXd s;                    // dense scalar coefficients
    std::vector<Eigen::MatrixXcd> blocks; // dense Hermitian coefficients
    std::vector<bool> diag_only;          // per block: true if diagonal
    std::vector<Eigen::VectorXd> diag;    // real diagonal when diag_only

    double value(const Vars& z) const {
        double v = constant + s.dot(z.s);
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            if (diag_only[b]) {
                if (diag[b].size() > 0) v += diag[b].dot(z.x[b].diagonal().real());
            } else {
                v += blocks[b].cwiseProduct(z.x[b].conjugate()).sum().real();
            }
        }
        return v;
    }

    // Directional derivative along a block-vector (no constant).
    double slope(const Vars& d) const {
        double v = s.dot(d.s);
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            if (diag_only[b]) {
                if (diag[b].size() > 0) v += diag[b].dot(d.x[b].diagonal().real());
            } else {
                v += blocks[b].cwiseProduct(d.x[b].conjugate()).sum().real();
            }
        }
        return v;
    }

    void add_to(Vars& g, double w) const {
        g.s += w * s;
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            if (diag_only[b]) {
                if (diag[b].size() > 0) g.x[b].diagonal() += (w * diag[b]).cast<std::complex<double>>();
            } else {
                g.x[b] += w * blocks[b];
            }
        }
    }
};

struct LogRow {
    double weight_nat = 0.0;  // weight / ln 2
    double weight_log2 = 0.0;
    double scale = 1.0;       // coefficient magnitude, for phase-I margins
    Row row;
};

struct Working {
    int n = 0;
    Eigen::VectorXd lo, hi;  // finite everywhere (synthetic wide box applied)
    std::vector<int> dims;
    std::vector<LogRow> logs;
    Row lin;
    std::vector<Row> ineqs;  // row.value >= 0, coefficient-normalized
    std::vector<Row> eqs;    // row.value == 0, coefficient-normalized
};

double row_coeff_scale(const Row& r) {
    double m = 0.0;
    if (r.s.size() > 0) m = r.s.cwiseAbs().maxCoeff();
    for (std::size_t b = 0; b < r.blocks.size(); ++b) {
        if (r.diag_only[b]) {
            if (r.diag[b].size() > 0) m = std::max(m, r.diag[b].cwiseAbs().maxCoeff());
        } else if (r.blocks[b].size() > 0) {
            m = std::max(m, r.blocks[b].cwiseAbs().maxCoeff());
        }
    }
    return m;
}

Row make_row(const AffineExpr& e, int n, const std::vector<int>& dims) {
    Row r;
    r.constant = e.constant;
    r.s = Eigen::VectorXd::Zero(n);
    if (e.scalar_coeffs.size() > 0) {
        if (e.scalar_coeffs.size() != n) {
            throw std::invalid_argument("conic: scalar coefficient size mismatch");
        }
        r.s = e.scalar_coeffs;
    }
    const std::size_t nb = dims.size();
    if (!e.block_coeffs.empty() && e.block_coeffs.size() != nb) {
        throw std::invalid_argument("conic: block coefficient count mismatch");
    }
    r.blocks.resize(nb);
    r.diag_only.assign(nb, true);
    r.diag.resize(nb);
    for (std::size_t b = 0; b < nb; ++b) {
        const int d = dims[b];
        if (e.block_coeffs.empty() || e.block_coeffs[b].size() == 0) {
            r.blocks[b] = Eigen::MatrixXcd();
            r.diag[b] = Eigen::VectorXd();
            continue;
        }
        if (e.block_coeffs[b].rows() != d || e.block_coeffs[b].cols() != d) {
            throw std::invalid_argument("conic: block coefficient dimension mismatch");
        }
        Eigen::MatrixXcd c = 0.5 * (e.block_coeffs[b] + e.block_coeffs[b].adjoint());
        double off = 0.0;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                if (i != j) off = std::max(off, std::abs(c(i, j)));
        if (off == 0.0) {
            r.diag[b] = c.diagonal().real();
            r.blocks[b] = Eigen::MatrixXcd();
        } else {
            r.diag_only[b] = false;
            r.blocks[b] = std::move(c);
            r.diag[b] = Eigen::VectorXd();
        }
    }
    return r;
}

// Dense coefficient view of a row as a block-vector (for P-applications).
Vars row_as_vars(const Row& r, int n, const std::vector<int>& dims) {
    Vars v = zeros_like(n, dims);
    v.s = r.s;
    for (std::size_t b = 0; b < dims.size(); ++b) {
        if (r.diag_only[b]) {
            if (r.diag[b].size() > 0)
                v.x[b].diagonal() = r.diag[b].cast<std::complex<double>>();
        } else {
            v.x[b] = r.blocks[b];
        }
    }
    return v;
}

// ---------------------------------------------------------------------------
// Barrier machinery
// ---------------------------------------------------------------------------

struct StepState {
    std::vector<Eigen::LLT<Eigen::MatrixXcd>> llt;
    std::vector<Eigen::MatrixXcd> xinv;
    std::vector<Eigen::MatrixXd> w;  // |X_ij|^2, built lazily for eq Schur
    Eigen::VectorXd bound_curv;      // scalar part of H0
};

enum class CenterResult { kCentered, kEarlyExit, kBudget, kFailure };

class BarrierSolver {
  public:
    BarrierSolver(const Working& wk, int* budget) : wk_(wk), budget_(budget) {
        barrier_count_ = static_cast<double>(wk_.ineqs.size());
        for (int d : wk_.dims) barrier_count_ += d;
        for (int i = 0; i < wk_.n; ++i) {
            if (std::isfinite(wk_.lo[i])) barrier_count_ += 1.0;
            if (std::isfinite(wk_.hi[i])) barrier_count_ += 1.0;
        }
        barrier_count_ = std::max(barrier_count_, 1.0);
    }

    double barrier_count() const { return barrier_count_; }

    // Objective in log2 units (the maximized one).
    double objective(const Vars& z) const {
        double v = wk_.lin.value(z);
        for (const auto& lt : wk_.logs) v += lt.weight_log2 * std::log2(lt.row.value(z));
        return v;
    }

    // Minimized barrier potential; +inf outside the domain.
    double potential(const Vars& z, double t) const {
        double phi = -t * wk_.lin.value(z);
        for (const auto& lt : wk_.logs) {
            const double a = lt.row.value(z);
            if (!(a > 0.0)) return kInf;
            phi -= t * lt.weight_nat * std::log(a);
        }
        for (const auto& iq : wk_.ineqs) {
            const double e = iq.value(z);
            if (!(e > 0.0)) return kInf;
            phi -= std::log(e);
        }
        for (int i = 0; i < wk_.n; ++i) {
            if (std::isfinite(wk_.lo[i])) {
                const double sl = z.s[i] - wk_.lo[i];
                if (!(sl > 0.0)) return kInf;
                phi -= std::log(sl);
            }
            if (std::isfinite(wk_.hi[i])) {
                const double sl = wk_.hi[i] - z.s[i];
                if (!(sl > 0.0)) return kInf;
                phi -= std::log(sl);
            }
        }
        for (const auto& x : z.x) {
            Eigen::LLT<Eigen::MatrixXcd> llt(x);
            if (llt.info() != Eigen::Success) return kInf;
            double ld = 0.0;
            for (Eigen::Index i = 0; i < x.rows(); ++i)
                ld += std::log(llt.matrixL()(i, i).real());
            phi -= 2.0 * ld;
        }
        return std::isfinite(phi) ? phi : kInf;
    }

    // Follows the central path until the objective gap bound drops below
    // gap_target. Centering is deliberately loose (decrement^2/2 <= 0.01):
    // the accuracy comes from pushing t far enough, which keeps the Armijo
    // comparisons well above double-precision noise even for huge t. The
    // early-exit callback is polled after every Newton step.
    template <class EarlyExit>
    CenterResult follow(Vars& z, double gap_target, EarlyExit&& early) {
        double t = 1.0;
        const double kappa = 12.0;
        const double m = barrier_count_;
        const double gap_coeff = m + std::sqrt(m) + 1.0;
        while (true) {
            const CenterResult cr = center(z, t, 0.01, early);
            if (cr != CenterResult::kCentered) return cr;
            if (gap_coeff / t <= gap_target) return CenterResult::kCentered;
            t *= kappa;
        }
    }

    template <class EarlyExit>
    CenterResult center(Vars& z, double t, double center_tol, EarlyExit&& early) {
        for (;;) {
            if (*budget_ <= 0) return CenterResult::kBudget;
            --*budget_;

            StepState st;
            if (!prepare(z, st)) return CenterResult::kFailure;
            Vars g = gradient(z, st, t);
            Vars delta;
            double lambda2 = 0.0;
            if (!newton_direction(z, st, g, t, delta, lambda2)) return CenterResult::kFailure;
            if (!(lambda2 >= -1e-9) || !std::isfinite(lambda2)) return CenterResult::kFailure;
            lambda2 = std::max(lambda2, 0.0);
            if (0.5 * lambda2 <= center_tol) return CenterResult::kCentered;

            if (!line_search(z, g, delta, t)) return CenterResult::kFailure;
            if (early(z)) return CenterResult::kEarlyExit;
        }
    }

  private:
    bool prepare(const Vars& z, StepState& st) const {
        const std::size_t nb = wk_.dims.size();
        st.llt.resize(nb);
        st.xinv.resize(nb);
        st.w.resize(nb);
        for (std::size_t b = 0; b < nb; ++b) {
            st.llt[b].compute(z.x[b]);
            if (st.llt[b].info() != Eigen::Success) return false;
            st.xinv[b] = st.llt[b].solve(
                Eigen::MatrixXcd::Identity(wk_.dims[b], wk_.dims[b]));
        }
        st.bound_curv = Eigen::VectorXd::Zero(wk_.n);
        for (int i = 0; i < wk_.n; ++i) {
            double c = 0.0;
            if (std::isfinite(wk_.lo[i])) {
                const double sl = z.s[i] - wk_.lo[i];
                if (!(sl > 0.0)) return false;
                c += 1.0 / (sl * sl);
            }
            if (std::isfinite(wk_.hi[i])) {
                const double sl = wk_.hi[i] - z.s[i];
                if (!(sl > 0.0)) return false;
                c += 1.0 / (sl * sl);
            }
            if (!(c > 0.0)) return false;  // every scalar carries a box
            st.bound_curv[i] = c;
        }
        return true;
    }

    Vars gradient(const Vars& z, const StepState& st, double t) const {
        Vars g = zeros_like(wk_.n, wk_.dims);
        wk_.lin.add_to(g, -t);
        for (const auto& lt : wk_.logs) {
            const double a = lt.row.value(z);
            lt.row.add_to(g, -t * lt.weight_nat / a);
        }
        for (const auto& iq : wk_.ineqs) {
            const double e = iq.value(z);
            iq.add_to(g, -1.0 / e);
        }
        for (int i = 0; i < wk_.n; ++i) {
            if (std::isfinite(wk_.lo[i])) g.s[i] -= 1.0 / (z.s[i] - wk_.lo[i]);
            if (std::isfinite(wk_.hi[i])) g.s[i] += 1.0 / (wk_.hi[i] - z.s[i]);
        }
        for (std::size_t b = 0; b < wk_.dims.size(); ++b) g.x[b] -= st.xinv[b];
        return g;
    }

    // H0^{-1}: divide scalars by the bound curvature, map blocks D -> X D X.
    Vars apply_p(const Vars& z, const StepState& st, const Vars& v) const {
        Vars r = zeros_like(wk_.n, wk_.dims);
        r.s = v.s.cwiseQuotient(st.bound_curv);
        for (std::size_t b = 0; b < wk_.dims.size(); ++b) {
            r.x[b] = z.x[b] * v.x[b] * z.x[b];
        }
        return r;
    }

    bool newton_direction(const Vars& z, StepState& st, const Vars& g, double t,
                          Vars& delta, double& lambda2) const {
        // Low-rank Hessian pieces: one per objective log and per inequality.
        struct RankOne {
            double rho;
            const Row* row;
        };
        std::vector<RankOne> lr;
        lr.reserve(wk_.logs.size() + wk_.ineqs.size());
        for (const auto& lt : wk_.logs) {
            const double a = lt.row.value(z);
            lr.push_back({t * lt.weight_nat / (a * a), &lt.row});
        }
        for (const auto& iq : wk_.ineqs) {
            const double e = iq.value(z);
            lr.push_back({1.0 / (e * e), &iq});
        }
        const int r = static_cast<int>(lr.size());
        const int k = static_cast<int>(wk_.eqs.size());

        std::vector<Vars> pu(r);
        for (int i = 0; i < r; ++i) {
            pu[i] = apply_p(z, st, row_as_vars(*lr[i].row, wk_.n, wk_.dims));
        }
        Eigen::MatrixXd smat(r, r);
        for (int i = 0; i < r; ++i) {
            for (int j = 0; j <= i; ++j) {
                const double v = lr[i].row->slope(pu[j]);
                smat(i, j) = v;
                smat(j, i) = v;
            }
            smat(i, i) += 1.0 / lr[i].rho;
        }
        Eigen::LDLT<Eigen::MatrixXd> sldlt;
        if (r > 0) {
            sldlt.compute(smat);
            if (sldlt.info() != Eigen::Success) return false;
        }

        auto apply_hinv = [&](const Vars& pv) {
            // pv must be apply_p of the input; returns H^{-1} applied to it.
            Vars out = pv;
            if (r > 0) {
                Eigen::VectorXd upv(r);
                for (int i = 0; i < r; ++i) upv[i] = lr[i].row->slope(pv);
                const Eigen::VectorXd y = sldlt.solve(upv);
                for (int i = 0; i < r; ++i) axpy(out, -y[i], pu[i]);
            }
            return out;
        };

        const Vars pg = apply_p(z, st, g);
        Eigen::VectorXd nu;
        if (k > 0) {
            // Schur system over the equality multipliers.
            bool need_w = false;
            for (const auto& eq : wk_.eqs)
                for (std::size_t b = 0; b < wk_.dims.size(); ++b)
                    if (eq.diag_only[b] && eq.diag[b].size() > 0) need_w = true;
            if (need_w) {
                for (std::size_t b = 0; b < wk_.dims.size(); ++b) {
                    st.w[b] = z.x[b].cwiseAbs2();
                }
            }
            std::vector<std::vector<Eigen::MatrixXcd>> vdense(k);
            for (int i = 0; i < k; ++i) {
                const Row& eq = wk_.eqs[i];
                vdense[i].resize(wk_.dims.size());
                for (std::size_t b = 0; b < wk_.dims.size(); ++b) {
                    if (!eq.diag_only[b] && eq.blocks[b].size() > 0) {
                        vdense[i][b] = z.x[b] * eq.blocks[b] * z.x[b];
                    }
                }
            }
            Eigen::MatrixXd epe(k, k);
            for (int i = 0; i < k; ++i) {
                for (int j = 0; j <= i; ++j) {
                    const Row& a = wk_.eqs[i];
                    const Row& b = wk_.eqs[j];
                    double v = a.s.cwiseQuotient(st.bound_curv).dot(b.s);
                    for (std::size_t bb = 0; bb < wk_.dims.size(); ++bb) {
                        const bool ad = a.diag_only[bb], bd = b.diag_only[bb];
                        const bool ae = ad ? a.diag[bb].size() == 0 : a.blocks[bb].size() == 0;
                        const bool be = bd ? b.diag[bb].size() == 0 : b.blocks[bb].size() == 0;
                        if (ae || be) continue;
                        if (ad && bd) {
                            v += a.diag[bb].dot(st.w[bb] * b.diag[bb]);
                        } else if (!ad) {
                            const Eigen::MatrixXcd& vd = vdense[i][bb];
                            if (bd) {
                                v += b.diag[bb].dot(vd.diagonal().real());
                            } else {
                                v += b.blocks[bb].cwiseProduct(vd.conjugate()).sum().real();
                            }
                        } else {
                            // a diagonal, b dense
                            const Eigen::MatrixXcd& vd = vdense[j][bb];
                            v += a.diag[bb].dot(vd.diagonal().real());
                        }
                    }
                    epe(i, j) = v;
                    epe(j, i) = v;
                }
            }
            Eigen::MatrixXd epu(k, r);
            Eigen::VectorXd epg(k);
            for (int i = 0; i < k; ++i) {
                for (int j = 0; j < r; ++j) epu(i, j) = wk_.eqs[i].slope(pu[j]);
                epg[i] = wk_.eqs[i].slope(pg);
            }
            Eigen::MatrixXd ehe = epe;
            Eigen::VectorXd ehg = epg;
            if (r > 0) {
                const Eigen::MatrixXd sy = sldlt.solve(epu.transpose());
                ehe -= epu * sy;
                Eigen::VectorXd upg(r);
                for (int j = 0; j < r; ++j) upg[j] = lr[j].row->slope(pg);
                ehg -= epu * sldlt.solve(upg);
            }
            Eigen::LDLT<Eigen::MatrixXd> kldlt(ehe);
            if (kldlt.info() != Eigen::Success) {
                Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(ehe);
                nu = cod.solve(-ehg);
            } else {
                nu = kldlt.solve(-ehg);
                if (!nu.allFinite()) {
                    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(ehe);
                    nu = cod.solve(-ehg);
                }
            }
            if (!nu.allFinite()) return false;
        }

        Vars w = g;
        for (int i = 0; i < k; ++i) wk_.eqs[i].add_to(w, nu[i]);
        const Vars pw = apply_p(z, st, w);
        delta = apply_hinv(w, pw);
        delta.s = -delta.s;
        for (auto& m : delta.x) m = -m;
        lambda2 = -dot(delta, g);
        return true;
    }

    bool line_search(Vars& z, const Vars& g, const Vars& delta, double t) const {
        double sigma = 1.0;
        auto cap = [&sigma](double value, double rate) {
            if (rate < 0.0) sigma = std::min(sigma, -0.995 * value / rate);
        };
        for (const auto& lt : wk_.logs) cap(lt.row.value(z), lt.row.slope(delta));
        for (const auto& iq : wk_.ineqs) cap(iq.value(z), iq.slope(delta));
        for (int i = 0; i < wk_.n; ++i) {
            if (std::isfinite(wk_.lo[i])) cap(z.s[i] - wk_.lo[i], delta.s[i]);
            if (std::isfinite(wk_.hi[i])) cap(wk_.hi[i] - z.s[i], -delta.s[i]);
        }
        const double phi0 = potential(z, t);
        const double descent = dot(g, delta);  // negative
        for (int it = 0; it < 60; ++it) {
            Vars cand = z;
            axpy(cand, sigma, delta);
            const double phi1 = potential(cand, t);
            if (phi1 <= phi0 + 0.01 * sigma * descent) {
                z = std::move(cand);
                return true;
            }
            sigma *= 0.5;
        }
        return false;
    }

    const Working& wk_;
    int* budget_;
    double barrier_count_ = 1.0;
};

// ---------------------------------------------------------------------------
// Equality projection and margins
// ---------------------------------------------------------------------------

bool project_equalities(const Working& wk, Vars& z) {
    const int k = static_cast<int>(wk.eqs.size());
    if (k == 0) return true;
    std::vector<Vars> rows(k);
    Eigen::MatrixXd gram(k, k);
    Eigen::VectorXd resid(k);
    for (int i = 0; i < k; ++i) rows[i] = row_as_vars(wk.eqs[i], wk.n, wk.dims);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j <= i; ++j) {
            gram(i, j) = dot(rows[i], rows[j]);
            gram(j, i) = gram(i, j);
        }
        resid[i] = wk.eqs[i].value(z);
    }
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(gram);
    const Eigen::VectorXd y = cod.solve(resid);
    if (!y.allFinite()) return false;
    for (int i = 0; i < k; ++i) axpy(z, -y[i], rows[i]);
    for (int i = 0; i < k; ++i) {
        if (std::abs(wk.eqs[i].value(z)) > 1e-7) return false;
    }
    return true;
}

double min_margin(const Working& wk, const Vars& z) {
    double m = kInf;
    for (const auto& lt : wk.logs) m = std::min(m, lt.row.value(z) / lt.scale);
    for (const auto& iq : wk.ineqs) m = std::min(m, iq.value(z));
    for (int i = 0; i < wk.n; ++i) {
        if (std::isfinite(wk.lo[i])) m = std::min(m, z.s[i] - wk.lo[i]);
        if (std::isfinite(wk.hi[i])) m = std::min(m, wk.hi[i] - z.s[i]);
    }
    for (const auto& x : z.x) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(x, Eigen::EigenvaluesOnly);
        m = std::min(m, es.eigenvalues().minCoeff());
    }
    return m;
}

// ---------------------------------------------------------------------------
// Phase I: maximize the worst constraint margin in shifted variables.
// ---------------------------------------------------------------------------

struct PhaseOne {
    Working wk;
    int u_index = 0;
};

PhaseOne build_phase_one(const Working& orig, const Vars& hint, double u_start) {
    PhaseOne p1;
    Working& w = p1.wk;
    w.n = orig.n + 1;
    p1.u_index = orig.n;
    w.dims = orig.dims;

    w.lo = Eigen::VectorXd::Constant(w.n, -kInf);
    w.hi = Eigen::VectorXd::Constant(w.n, kInf);
    for (int i = 0; i < orig.n; ++i) {
        // Widened plain box keeps H0 positive definite while the true bounds
        // are enforced through margined inequalities below.
        w.lo[i] = orig.lo[i] - 1.0;
        w.hi[i] = orig.hi[i] + 1.0;
    }
    w.lo[p1.u_index] = u_start - 10.0 * std::max(1.0, std::abs(u_start));
    w.hi[p1.u_index] = 0.5;

    auto lift_row = [&](const Row& r) {
        Row out = r;
        Eigen::VectorXd s(w.n);
        s.head(orig.n) = r.s;
        double utr = 0.0;  // coefficient picked up by X = Y + u I
        for (std::size_t b = 0; b < orig.dims.size(); ++b) {
            if (r.diag_only[b]) {
                if (r.diag[b].size() > 0) utr += r.diag[b].sum();
            } else if (r.blocks[b].size() > 0) {
                utr += r.blocks[b].trace().real();
            }
        }
        s[p1.u_index] = utr;
        out.s = std::move(s);
        return out;
    };

    w.lin = Row{};
    w.lin.s = Eigen::VectorXd::Zero(w.n);
    w.lin.s[p1.u_index] = 1.0;
    w.lin.blocks.resize(w.dims.size());
    w.lin.diag_only.assign(w.dims.size(), true);
    w.lin.diag.resize(w.dims.size());

    for (const auto& eq : orig.eqs) w.eqs.push_back(lift_row(eq));
    for (const auto& iq : orig.ineqs) {
        Row r = lift_row(iq);
        r.s[p1.u_index] -= 1.0;  // e(z) - u >= 0
        w.ineqs.push_back(std::move(r));
    }
    for (const auto& lt : orig.logs) {
        Row r = lift_row(lt.row);
        const double sc = std::max(lt.scale, kCoeffEps);
        r.constant /= sc;
        r.s /= sc;
        for (std::size_t b = 0; b < r.blocks.size(); ++b) {
            if (r.diag_only[b]) {
                if (r.diag[b].size() > 0) r.diag[b] /= sc;
            } else if (r.blocks[b].size() > 0) {
                r.blocks[b] /= sc;
            }
        }
        r.s[p1.u_index] -= 1.0;  // a(z)/scale - u >= 0
        w.ineqs.push_back(std::move(r));
    }
    for (int i = 0; i < orig.n; ++i) {
        if (std::isfinite(orig.lo[i])) {
            Row r;
            r.constant = -orig.lo[i];
            r.s = Eigen::VectorXd::Zero(w.n);
            r.s[i] = 1.0;
            r.s[p1.u_index] = -1.0;
            r.blocks.resize(w.dims.size());
            r.diag_only.assign(w.dims.size(), true);
            r.diag.resize(w.dims.size());
            w.ineqs.push_back(std::move(r));
        }
        if (std::isfinite(orig.hi[i])) {
            Row r;
            r.constant = orig.hi[i];
            r.s = Eigen::VectorXd::Zero(w.n);
            r.s[i] = -1.0;
            r.s[p1.u_index] = -1.0;
            r.blocks.resize(w.dims.size());
            r.diag_only.assign(w.dims.size(), true);
            r.diag.resize(w.dims.size());
            w.ineqs.push_back(std::move(r));
        }
    }
    (void)hint;
    return p1;
}

}  // namespace

// ---------------------------------------------------------------------------
// Public entry points
// ---------------------------------------------------------------------------

Solution solve(const ConicProgram& prog, const SolverSettings& settings) {
    Solution sol;
    sol.status = SolveStatus::kNumericalFailure;

    Working wk;
    wk.n = prog.num_scalars;
    wk.dims = prog.block_dims;
    for (int d : wk.dims) {
        if (d < 1) throw std::invalid_argument("conic: block dimension must be >= 1");
    }
    wk.lo = Eigen::VectorXd::Constant(wk.n, -kSyntheticBound);
    wk.hi = Eigen::VectorXd::Constant(wk.n, kSyntheticBound);
    for (int i = 0; i < wk.n && i < prog.scalar_lower.size(); ++i) {
        if (std::isfinite(prog.scalar_lower[i])) wk.lo[i] = prog.scalar_lower[i];
    }
    for (int i = 0; i < wk.n && i < prog.scalar_upper.size(); ++i) {
        if (std::isfinite(prog.scalar_upper[i])) wk.hi[i] = prog.scalar_upper[i];
    }
    for (int i = 0; i < wk.n; ++i) {
        if (!(wk.lo[i] < wk.hi[i])) {
            sol.status = SolveStatus::kInfeasible;
            return sol;
        }
    }

    wk.lin = make_row(prog.affine_objective, wk.n, wk.dims);
    for (const auto& lt : prog.log_terms) {
        if (!(lt.weight > 0.0)) {
            throw std::invalid_argument("conic: log term weights must be positive");
        }
        LogRow lr;
        lr.weight_log2 = lt.weight;
        lr.weight_nat = lt.weight / kLn2;
        lr.row = make_row(lt.arg, wk.n, wk.dims);
        lr.scale = std::max(row_coeff_scale(lr.row), kCoeffEps);
        if (row_coeff_scale(lr.row) < kCoeffEps) {
            // Constant argument: fold into the affine objective.
            if (!(lr.row.constant > 0.0)) {
                sol.status = SolveStatus::kInfeasible;
                return sol;
            }
            wk.lin.constant += lt.weight * std::log2(lr.row.constant);
            continue;
        }
        wk.logs.push_back(std::move(lr));
    }
    for (const auto& e : prog.inequalities) {
        Row r = make_row(e, wk.n, wk.dims);
        const double sc = row_coeff_scale(r);
        if (sc < kCoeffEps) {
            if (r.constant < -1e-12) {
                sol.status = SolveStatus::kInfeasible;
                return sol;
            }
            continue;
        }
        r.constant /= sc;
        r.s /= sc;
        for (std::size_t b = 0; b < r.blocks.size(); ++b) {
            if (r.diag_only[b]) {
                if (r.diag[b].size() > 0) r.diag[b] /= sc;
            } else if (r.blocks[b].size() > 0) {
                r.blocks[b] /= sc;
            }
        }
        wk.ineqs.push_back(std::move(r));
    }
    for (const auto& e : prog.equalities) {
        Row r = make_row(e, wk.n, wk.dims);
        const double sc = row_coeff_scale(r);
        if (sc < kCoeffEps) {
            if (std::abs(r.constant) > 1e-12) {
                sol.status = SolveStatus::kInfeasible;
                return sol;
            }
            continue;
        }
        r.constant /= sc;
        r.s /= sc;
        for (std::size_t b = 0; b < r.blocks.size(); ++b) {
            if (r.diag_only[b]) {
                if (r.diag[b].size() > 0) r.diag[b] /= sc;
            } else if (r.blocks[b].size() > 0) {
                r.blocks[b] /= sc;
            }
        }
        wk.eqs.push_back(std::move(r));
    }

    // Starting point: caller hint or a box/identity synthesis.
    Vars z = zeros_like(wk.n, wk.dims);
    if (prog.has_initial) {
        if (prog.initial_scalars.size() == wk.n) z.s = prog.initial_scalars;
        if (prog.initial_blocks.size() == wk.dims.size()) {
            for (std::size_t b = 0; b < wk.dims.size(); ++b) {
                if (prog.initial_blocks[b].rows() == wk.dims[b]) {
                    z.x[b] = 0.5 * (prog.initial_blocks[b] + prog.initial_blocks[b].adjoint());
                }
            }
        }
    } else {
        for (std::size_t b = 0; b < wk.dims.size(); ++b) {
            z.x[b] = Eigen::MatrixXcd::Identity(wk.dims[b], wk.dims[b]);
        }
    }
    for (int i = 0; i < wk.n; ++i) {
        double v = z.s[i];
        const double mid = 0.5 * (wk.lo[i] + wk.hi[i]);
        if (!prog.has_initial) v = mid;
        z.s[i] = std::clamp(v, wk.lo[i], wk.hi[i]);
    }
    if (!project_equalities(wk, z)) {
        sol.status = SolveStatus::kInfeasible;
        return sol;
    }

    int budget = settings.max_iterations;

    const double margin0 = min_margin(wk, z);
    if (!(margin0 > 1e-12)) {
        // Phase I, in variables (s, u, Y = X - uI).
        const double delta = 0.1 * std::max(1.0, std::abs(margin0));
        const double u_start = margin0 - delta;
        PhaseOne p1 = build_phase_one(wk, z, u_start);
        Vars y = zeros_like(p1.wk.n, p1.wk.dims);
        y.s.head(wk.n) = z.s;
        y.s[p1.u_index] = u_start;
        for (std::size_t b = 0; b < wk.dims.size(); ++b) {
            y.x[b] = z.x[b] -
                     u_start * Eigen::MatrixXcd::Identity(wk.dims[b], wk.dims[b]);
        }
        BarrierSolver p1solver(p1.wk, &budget);
        const double target = 1e-4;
        bool reached = false;
        auto early = [&](const Vars& v) {
            if (v.s[p1.u_index] >= target) {
                reached = true;
                return true;
            }
            return false;
        };
        const CenterResult cr = p1solver.follow(y, 1e-9, early);
        const double u_final = y.s[p1.u_index];
        if (cr == CenterResult::kFailure || cr == CenterResult::kBudget) {
            sol.status = SolveStatus::kNumericalFailure;
            return sol;
        }
        if (!reached && u_final <= 1e-12) {
            sol.status = SolveStatus::kInfeasible;
            return sol;
        }
        z.s = y.s.head(wk.n);
        for (std::size_t b = 0; b < wk.dims.size(); ++b) {
            z.x[b] = y.x[b] +
                     u_final * Eigen::MatrixXcd::Identity(wk.dims[b], wk.dims[b]);
            z.x[b] = 0.5 * (z.x[b] + z.x[b].adjoint()).eval();
        }
        if (!project_equalities(wk, z) || !(min_margin(wk, z) > 0.0)) {
            sol.status = SolveStatus::kInfeasible;
            return sol;
        }
    }

    BarrierSolver solver(wk, &budget);
    auto no_exit = [](const Vars&) { return false; };
    const CenterResult cr = solver.follow(z, settings.tolerance, no_exit);
    if (cr != CenterResult::kCentered) {
        sol.status = SolveStatus::kNumericalFailure;
        return sol;
    }

    sol.status = SolveStatus::kOptimal;
    sol.scalar_values = z.s;
    sol.matrix_values = z.x;
    sol.objective_value = solver.objective(z);
    return sol;
}

Eigen::MatrixXd real_embedding(const Eigen::MatrixXcd& h) {
    const Eigen::Index m = h.rows();
    Eigen::MatrixXd s(2 * m, 2 * m);
    s.topLeftCorner(m, m) = h.real();
    s.topRightCorner(m, m) = -h.imag();
    s.bottomLeftCorner(m, m) = h.imag();
    s.bottomRightCorner(m, m) = h.real();
    return s;
}

Eigen::MatrixXcd from_real_embedding(const Eigen::MatrixXd& s) {
    const Eigen::Index m = s.rows() / 2;
    Eigen::MatrixXcd h(m, m);
    h.real() = 0.5 * (s.topLeftCorner(m, m) + s.bottomRightCorner(m, m));
    h.imag() = 0.5 * (s.bottomLeftCorner(m, m) - s.topRightCorner(m, m));
    return h;
}

}  // namespace starfd::conic
