#include "cirfuse/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cirfuse {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

CMat CMat::identity(std::size_t n) {
    CMat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = cplx{1.0, 0.0};
    return m;
}

double CMat::frobenius() const {
    double s = 0.0;
    for (const cplx& v : a) s += std::norm(v);
    return std::sqrt(s);
}

std::pair<std::size_t, std::vector<cplx>> select_bin(const SnapshotMatrix& h_matrix,
                                                     const DftPlan& plan) {
    const CMat& h = h_matrix.data;
    if (h.rows == 0 || h.cols == 0) throw std::invalid_argument("select_bin: empty matrix");
    if (h.rows != plan.window_len()) throw std::invalid_argument("select_bin: window length mismatch");

    std::vector<cplx> column(h.rows);
    std::size_t best = 0;
    double best_energy = -1.0;
    std::vector<cplx> best_column;
    for (std::size_t c = 0; c < h.cols; ++c) {
        for (std::size_t r = 0; r < h.rows; ++r) column[r] = h(r, c);
        const double e = boi_energy(column, plan);
        if (e > best_energy) {
            best_energy = e;
            best = c;
            best_column = column;
        }
    }
    return {best, std::move(best_column)};
}

GeneralizedPair build_pair(const SnapshotMatrix& h_matrix, const DftPlan& plan) {
    const CMat& h = h_matrix.data;
    if (h.rows != plan.window_len()) throw std::invalid_argument("build_pair: dimension mismatch");
    const std::size_t n = h.rows;
    const std::size_t k = h.cols;
    const auto& rows = plan.band_rows();

    // G = F_I H, one band row at a time.
    CMat g(rows.size(), k);
    for (std::size_t ri = 0; ri < rows.size(); ++ri) {
        const double ang = -2.0 * kPi * static_cast<double>(rows[ri]) / static_cast<double>(n);
        const cplx w{std::cos(ang), std::sin(ang)};
        cplx p{1.0, 0.0};
        for (std::size_t t = 0; t < n; ++t) {
            const cplx* row = &h.a[t * k];
            for (std::size_t c = 0; c < k; ++c) g(ri, c) += row[c] * p;
            p *= w;
        }
    }

    GeneralizedPair pair{CMat(k, k), CMat(k, k)};
    // A = G^H G
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i; j < k; ++j) {
            cplx s{0.0, 0.0};
            for (std::size_t r = 0; r < rows.size(); ++r) s += std::conj(g(r, i)) * g(r, j);
            pair.a(i, j) = s;
            pair.a(j, i) = std::conj(s);
        }
    }
    // B = N * H^H H (Parseval)
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i; j < k; ++j) {
            cplx s{0.0, 0.0};
            for (std::size_t t = 0; t < n; ++t) s += std::conj(h(t, i)) * h(t, j);
            s *= static_cast<double>(n);
            pair.b(i, j) = s;
            pair.b(j, i) = std::conj(s);
        }
    }
    // Hermitize: average with the conjugate transpose, exact real diagonal.
    for (auto* m : {&pair.a, &pair.b}) {
        for (std::size_t i = 0; i < k; ++i) {
            (*m)(i, i) = cplx{(*m)(i, i).real(), 0.0};
            for (std::size_t j = i + 1; j < k; ++j) {
                const cplx avg = 0.5 * ((*m)(i, j) + std::conj((*m)(j, i)));
                (*m)(i, j) = avg;
                (*m)(j, i) = std::conj(avg);
            }
        }
    }
    return pair;
}

EigResult hermitian_eig(const CMat& m) {
    if (m.rows != m.cols) throw std::invalid_argument("hermitian_eig: matrix not square");
    const std::size_t n = m.rows;
    const double nrm = m.frobenius();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (std::abs(m(i, j) - std::conj(m(j, i))) > 1e-8 * nrm + 1e-300) {
                throw std::invalid_argument("hermitian_eig: input not Hermitian within tolerance");
            }
        }
    }

    CMat a = m;
    CMat v = CMat::identity(n);
    if (nrm == 0.0) {
        EigResult r;
        r.values.assign(n, 0.0);
        r.vectors = std::move(v);
        return r;
    }

    const int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) off += 2.0 * std::norm(a(i, j));
        }
        if (std::sqrt(off) < 1e-12 * nrm) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double g = std::abs(apq);
                if (g < 1e-18 * nrm) continue;
                const cplx u = apq / g;  // phase of the pivot
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * g);
                const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                              : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cplx us = std::conj(u) * s;
                const cplx uc = std::conj(u) * c;

                // A <- J^H A J with J[p,p]=c, J[p,q]=s, J[q,p]=-conj(u)s, J[q,q]=conj(u)c
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const cplx akp = a(k, p);
                    const cplx akq = a(k, q);
                    a(k, p) = c * akp - us * akq;
                    a(k, q) = s * akp + uc * akq;
                    a(p, k) = std::conj(a(k, p));
                    a(q, k) = std::conj(a(k, q));
                }
                const double app_new = c * c * app + s * s * aqq - 2.0 * c * s * g;
                const double aqq_new = s * s * app + c * c * aqq + 2.0 * c * s * g;
                a(p, p) = cplx{app_new, 0.0};
                a(q, q) = cplx{aqq_new, 0.0};
                a(p, q) = cplx{0.0, 0.0};
                a(q, p) = cplx{0.0, 0.0};

                for (std::size_t k = 0; k < n; ++k) {
                    const cplx vkp = v(k, p);
                    const cplx vkq = v(k, q);
                    v(k, p) = c * vkp - us * vkq;
                    v(k, q) = s * vkp + uc * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });

    EigResult r;
    r.values.resize(n);
    r.vectors = CMat(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        r.values[j] = a(order[j], order[j]).real();
        for (std::size_t i = 0; i < n; ++i) r.vectors(i, j) = v(i, order[j]);
    }
    return r;
}

namespace {

std::vector<cplx> mat_vec(const CMat& m, const std::vector<cplx>& x) {
    std::vector<cplx> y(m.rows, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < m.rows; ++i) {
        cplx s{0.0, 0.0};
        for (std::size_t j = 0; j < m.cols; ++j) s += m(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

cplx quad_form(const CMat& m, const std::vector<cplx>& x) {
    const std::vector<cplx> mx = mat_vec(m, x);
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * mx[i];
    return s;
}

}  // namespace

FusionWeights solve_fusion(const GeneralizedPair& pair, double rank_tol) {
    const std::size_t k = pair.b.rows;
    if (k == 0 || pair.a.rows != k || pair.a.cols != k || pair.b.cols != k) {
        throw std::invalid_argument("solve_fusion: bad pair dimensions");
    }

    const EigResult eb = hermitian_eig(pair.b);
    const double lmax = eb.values.empty() ? 0.0 : eb.values.front();
    if (!(lmax > 0.0)) throw DegenerateWindow("solve_fusion: degenerate window (B has no energy)");

    std::size_t rank = 0;
    while (rank < k && eb.values[rank] > rank_tol * lmax) ++rank;

    // Whitener W = U_r Lambda_r^{-1/2}
    CMat wmat(k, rank);
    for (std::size_t j = 0; j < rank; ++j) {
        const double inv_sqrt = 1.0 / std::sqrt(eb.values[j]);
        for (std::size_t i = 0; i < k; ++i) wmat(i, j) = eb.vectors(i, j) * inv_sqrt;
    }

    // M = W^H A W
    CMat aw(k, rank);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < rank; ++j) {
            cplx s{0.0, 0.0};
            for (std::size_t l = 0; l < k; ++l) s += pair.a(i, l) * wmat(l, j);
            aw(i, j) = s;
        }
    }
    CMat mmat(rank, rank);
    for (std::size_t i = 0; i < rank; ++i) {
        for (std::size_t j = 0; j < rank; ++j) {
            cplx s{0.0, 0.0};
            for (std::size_t l = 0; l < k; ++l) s += std::conj(wmat(l, i)) * aw(l, j);
            mmat(i, j) = s;
        }
    }
    for (std::size_t i = 0; i < rank; ++i) {
        mmat(i, i) = cplx{mmat(i, i).real(), 0.0};
        for (std::size_t j = i + 1; j < rank; ++j) {
            const cplx avg = 0.5 * (mmat(i, j) + std::conj(mmat(j, i)));
            mmat(i, j) = avg;
            mmat(j, i) = std::conj(avg);
        }
    }

    const EigResult em = hermitian_eig(mmat);
    FusionWeights out;
    out.lambda = em.values.front();
    out.w.assign(k, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < k; ++i) {
        cplx s{0.0, 0.0};
        for (std::size_t j = 0; j < rank; ++j) s += wmat(i, j) * em.vectors(j, 0);
        out.w[i] = s;
    }

    // Enforce primal feasibility w^H B w = 1 exactly at working precision.
    const double bq = quad_form(pair.b, out.w).real();
    if (!(bq > 0.0)) throw DegenerateWindow("solve_fusion: degenerate window (zero feasible energy)");
    const double scale = 1.0 / std::sqrt(bq);
    for (cplx& v : out.w) v *= scale;

    // Fix the global phase: largest-magnitude entry real positive.
    std::size_t imax = 0;
    for (std::size_t i = 1; i < k; ++i) {
        if (std::abs(out.w[i]) > std::abs(out.w[imax])) imax = i;
    }
    const double amax = std::abs(out.w[imax]);
    if (amax > 0.0) {
        const cplx rot = std::conj(out.w[imax]) / amax;
        for (cplx& v : out.w) v *= rot;
    }
    return out;
}

std::pair<FusionWeights, std::vector<cplx>> fuse(const SnapshotMatrix& h_matrix,
                                                 const DftPlan& plan, double rank_tol) {
    const CMat& h = h_matrix.data;
    if (h.rows == 0 || h.cols == 0) throw std::invalid_argument("fuse: empty matrix");

    // Drop columns with negligible energy before building the pair.
    std::vector<double> col_energy(h.cols, 0.0);
    for (std::size_t r = 0; r < h.rows; ++r) {
        for (std::size_t c = 0; c < h.cols; ++c) col_energy[c] += std::norm(h(r, c));
    }
    const double emax = *std::max_element(col_energy.begin(), col_energy.end());
    if (!(emax > 0.0)) throw DegenerateWindow("fuse: degenerate window (all-zero matrix)");

    std::vector<std::size_t> keep;
    for (std::size_t c = 0; c < h.cols; ++c) {
        if (col_energy[c] >= 1e-12 * emax) keep.push_back(c);
    }

    SnapshotMatrix reduced;
    reduced.sample_rate_hz = h_matrix.sample_rate_hz;
    reduced.data = CMat(h.rows, keep.size());
    for (std::size_t r = 0; r < h.rows; ++r) {
        for (std::size_t c = 0; c < keep.size(); ++c) reduced.data(r, c) = h(r, keep[c]);
    }

    const GeneralizedPair pair = build_pair(reduced, plan);
    const FusionWeights reduced_w = solve_fusion(pair, rank_tol);

    FusionWeights full;
    full.lambda = reduced_w.lambda;
    full.w.assign(h.cols, cplx{0.0, 0.0});
    for (std::size_t c = 0; c < keep.size(); ++c) full.w[keep[c]] = reduced_w.w[c];

    std::vector<cplx> x(h.rows, cplx{0.0, 0.0});
    for (std::size_t r = 0; r < h.rows; ++r) {
        cplx s{0.0, 0.0};
        for (std::size_t c = 0; c < keep.size(); ++c) s += reduced.data(r, c) * reduced_w.w[c];
        x[r] = s;
    }
    return {std::move(full), std::move(x)};
}

}  // namespace cirfuse
