#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace oracle {

Rows rows_of(const wsn::Matrix& m) {
  Rows r(m.order(), std::vector<double>(m.order()));
  for (std::size_t i = 0; i < m.order(); ++i)
    for (std::size_t j = 0; j < m.order(); ++j) r[i][j] = m(i, j);
  return r;
}

std::vector<double> gauss_solve(Rows a, std::vector<double> b) {
  const std::size_t n = b.size();
  std::vector<std::vector<long double>> m(n, std::vector<long double>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m[i][j] = a[i][j];
    m[i][n] = b[i];
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(m[r][col]) > std::fabs(m[piv][col])) piv = r;
    if (m[piv][col] == 0.0L) throw std::runtime_error("singular");
    std::swap(m[piv], m[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const long double f = m[r][col] / m[col][col];
      for (std::size_t c = col; c <= n; ++c) m[r][c] -= f * m[col][c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    long double s = m[i][n];
    for (std::size_t j = i + 1; j < n; ++j) s -= m[i][j] * x[j];
    x[i] = static_cast<double>(s / m[i][i]);
  }
  return x;
}

std::vector<double> jacobi_eigenvalues(Rows a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
  std::sort(ev.begin(), ev.end());
  return ev;
}

Cov covariance(const wsn::NodeLayout& layout, const wsn::FieldParams& params) {
  const std::size_t m = layout.node_ids.size();
  auto sig = [&](std::size_t i) { return params.sigma_u.size() == 1 ? params.sigma_u[0] : params.sigma_u[i]; };
  Cov c;
  c.ruu.assign(m, std::vector<double>(m));
  c.rdu.resize(m);
  c.sigma_d_sq = params.sigma_d * params.sigma_d;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double d = std::hypot(layout.positions[i].x - layout.positions[j].x,
                                  layout.positions[i].y - layout.positions[j].y);
      c.ruu[i][j] = sig(i) * sig(j) * std::exp(-d / params.theta);
    }
    const double ds = std::hypot(layout.positions[i].x - layout.sink.x, layout.positions[i].y - layout.sink.y);
    c.rdu[i] = params.sigma_d * sig(i) * std::exp(-ds / params.theta);
  }
  return c;
}

Cov restrict(const Cov& cov, const std::vector<std::size_t>& idx) {
  Cov out;
  out.sigma_d_sq = cov.sigma_d_sq;
  for (std::size_t i : idx) {
    std::vector<double> row;
    for (std::size_t j : idx) row.push_back(cov.ruu[i][j]);
    out.ruu.push_back(row);
    out.rdu.push_back(cov.rdu[i]);
  }
  return out;
}

double mmse(const Cov& cov, const std::vector<double>& w) {
  long double j = cov.sigma_d_sq;
  for (std::size_t i = 0; i < w.size(); ++i) j -= 2.0L * cov.rdu[i] * w[i];
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t k = 0; k < w.size(); ++k) j += static_cast<long double>(w[i]) * cov.ruu[i][k] * w[k];
  return static_cast<double>(j);
}

double optimal_accuracy(const Cov& cov) {
  return 1.0 - mmse(cov, gauss_solve(cov.ruu, cov.rdu)) / cov.sigma_d_sq;
}

double best_subset_accuracy(const Cov& cov, std::size_t k) {
  const std::size_t m = cov.rdu.size();
  std::vector<bool> pick(m, false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), true);
  double best = -1.0;
  do {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < m; ++i)
      if (pick[i]) idx.push_back(i);
    best = std::max(best, optimal_accuracy(restrict(cov, idx)));
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return best;
}

std::vector<double> lms_sweep(const std::vector<double>& w, const std::vector<wsn::ObservationBlock>& blocks,
                              double mu) {
  std::vector<double> out = w;
  for (const auto& b : blocks) {
    double y = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) y += b.samples[k] * w[k];
    const double e = b.desired - y;
    for (std::size_t k = 0; k < w.size(); ++k) out[k] += mu * b.samples[k] * e;
  }
  return out;
}

double pooled_population_variance(const Rows& snapshots) {
  long double sum = 0.0L;
  std::size_t n = 0;
  for (const auto& s : snapshots)
    for (double v : s) {
      sum += v;
      ++n;
    }
  const long double mean = sum / static_cast<long double>(n);
  long double ss = 0.0L;
  for (const auto& s : snapshots)
    for (double v : s) ss += (v - mean) * (v - mean);
  return static_cast<double>(ss / static_cast<long double>(n));
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

wsn::NodeLayout random_layout(std::mt19937_64& rng, std::size_t max_nodes, double side, double min_gap) {
  std::uniform_int_distribution<std::size_t> count(1, max_nodes);
  std::uniform_real_distribution<double> coord(0.0, side);
  wsn::NodeLayout layout;
  layout.side = side;
  layout.sink = {coord(rng), coord(rng)};
  const std::size_t m = count(rng);
  while (layout.positions.size() < m) {
    const wsn::Point p{coord(rng), coord(rng)};
    bool far = true;
    for (const auto& q : layout.positions) far = far && std::hypot(p.x - q.x, p.y - q.y) >= min_gap;
    if (far) layout.positions.push_back(p);
  }
  layout.node_ids.resize(m);
  std::iota(layout.node_ids.begin(), layout.node_ids.end(), 1);
  return layout;
}

wsn::SymMatrix random_spd(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> b(n * n);
  for (double& x : b) x = g(rng);
  wsn::Matrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += b[i * n + k] * b[j * n + k];
      a(i, j) = s + (i == j ? static_cast<double>(n) : 0.0);
    }
  return wsn::SymMatrix(a);
}

}  // namespace oracle
