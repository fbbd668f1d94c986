#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

namespace oracle {

double rho0() {
  double lo = 1.0;
  double hi = 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (mid * std::tanh(mid) - 1.0 < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> disk_spectrum(int count) {
  std::vector<double> out;
  for (int k = 0; static_cast<int>(out.size()) < count; ++k) {
    // One cosine mode per k, plus a sine mode for k >= 1.
    const int copies = k == 0 ? 1 : 2;
    for (int c = 0; c < copies; ++c) out.push_back(k);
  }
  out.resize(count);
  return out;
}

double annulus_determinant(int k, double a, double sigma) {
  // u = (A r^k + B r^-k) cos(k theta); u_r = sigma u at r = 1, -u_r = sigma u at r = a.
  const double m11 = k - sigma;
  const double m12 = -k - sigma;
  const double m21 = -k * std::pow(a, k - 1) - sigma * std::pow(a, k);
  const double m22 = k * std::pow(a, -k - 1) - sigma * std::pow(a, -k);
  return m11 * m22 - m12 * m21;
}

std::vector<double> annulus_spectrum(double a, int count) {
  std::vector<double> out{0.0, (1.0 + 1.0 / a) / std::log(1.0 / a)};
  const double top = 4.0 * count + 10.0;
  const double step = 1e-3;
  for (int k = 1; k <= count; ++k) {
    auto f = [&](double s) { return annulus_determinant(k, a, s); };
    for (double s = step; s < top; s += step) {
      if (f(s - step) * f(s) > 0.0) continue;
      double lo = s - step;
      double hi = s;
      for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(lo) * f(mid) <= 0.0 ? hi : lo) = mid;
      }
      out.push_back(0.5 * (lo + hi));
      out.push_back(0.5 * (lo + hi));
    }
  }
  std::sort(out.begin(), out.end());
  out.resize(count);
  return out;
}

int bfs_domain_count(const steklab::TriangleMesh& mesh, const Eigen::VectorXd& u, double tau) {
  const double threshold = tau * u.cwiseAbs().maxCoeff();
  auto sign = [&](int v) { return std::abs(u[v]) <= threshold ? 0 : (u[v] > 0 ? 1 : -1); };
  std::vector<std::set<int>> adjacent(mesh.vertices.size());
  for (const auto& t : mesh.triangles) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        if (i != j) adjacent[t[i]].insert(t[j]);
      }
    }
  }
  std::vector<bool> seen(mesh.vertices.size(), false);
  int count = 0;
  for (int start = 0; start < static_cast<int>(mesh.vertices.size()); ++start) {
    if (seen[start] || sign(start) == 0) continue;
    ++count;
    std::queue<int> queue;
    queue.push(start);
    seen[start] = true;
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop();
      for (int w : adjacent[v]) {
        if (!seen[w] && sign(w) == sign(v)) {
          seen[w] = true;
          queue.push(w);
        }
      }
    }
  }
  return count;
}

}  // namespace oracle
