#include "oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <stdexcept>

#include <unistd.h>

#include <Eigen/Eigenvalues>

namespace noderank::testing {

namespace {

std::vector<std::string> numbered_labels(std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i + 1));
  return labels;
}

}  // namespace

SparseGraph toy_graph() {
  std::vector<IndexedEdge> edges{{0, 1}, {0, 2}, {1, 2}, {2, 4}, {3, 2}};
  return SparseGraph::from_indexed_edges(numbered_labels(5), edges);
}

SparseGraph random_graph(std::size_t n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  std::vector<IndexedEdge> edges;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      if (u != v && coin(rng)) edges.push_back({NodeId(u), NodeId(v)});
    }
  }
  return SparseGraph::from_indexed_edges(numbered_labels(n), edges);
}

SparseGraph random_dag(std::size_t n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  std::vector<IndexedEdge> edges;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      if (coin(rng)) edges.push_back({NodeId(u), NodeId(v)});
    }
  }
  return SparseGraph::from_indexed_edges(numbered_labels(n), edges);
}

SparseGraph complete_graph(std::size_t n) {
  std::vector<IndexedEdge> edges;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      if (u != v) edges.push_back({NodeId(u), NodeId(v)});
    }
  }
  return SparseGraph::from_indexed_edges(numbered_labels(n), edges);
}

SparseGraph star_graph(std::size_t leaves) {
  std::vector<IndexedEdge> edges;
  for (std::size_t i = 1; i <= leaves; ++i) edges.push_back({NodeId(i), 0});
  return SparseGraph::from_indexed_edges(numbered_labels(leaves + 1), edges);
}

Eigen::MatrixXd dense_adjacency(const SparseGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.num_nodes());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    for (NodeId v : g.out_neighbors(u)) a(u, v) = 1.0;
  }
  return a;
}

Eigen::MatrixXd dense_transition(const Eigen::MatrixXd& adjacency) {
  Eigen::MatrixXd h = adjacency.transpose();
  for (Eigen::Index j = 0; j < h.cols(); ++j) {
    const double s = h.col(j).sum();
    if (s > 0) h.col(j) /= s;
  }
  return h;
}

namespace {

// Column sums of A without the diagonal.
Eigen::VectorXd loop_free_indegree(const Eigen::MatrixXd& adjacency) {
  Eigen::MatrixXd a = adjacency;
  a.diagonal().setZero();
  return a.colwise().sum().transpose();
}

Eigen::VectorXd l1_normalized(Eigen::VectorXd k) {
  const double s = k.sum();
  if (s == 0) return Eigen::VectorXd::Constant(k.size(), 1.0 / double(k.size()));
  return k / s;
}

}  // namespace

Eigen::VectorXd dense_fatigue_ratio(const Eigen::MatrixXd& adjacency, double beta) {
  const Eigen::VectorXd indeg = loop_free_indegree(adjacency);
  const double n = double(adjacency.rows());
  Eigen::VectorXd k(indeg.size());
  for (Eigen::Index i = 0; i < k.size(); ++i) {
    k(i) = 1.0 - (indeg(i) + beta) / (n - 1.0 + beta);
  }
  return l1_normalized(k);
}

Eigen::VectorXd dense_fatigue_offset(const Eigen::MatrixXd& adjacency, double beta) {
  const Eigen::VectorXd indeg = loop_free_indegree(adjacency);
  const double n = double(adjacency.rows());
  Eigen::VectorXd k(indeg.size());
  for (Eigen::Index i = 0; i < k.size(); ++i) k(i) = 1.0 - indeg(i) / (n - 1.0) + beta;
  return l1_normalized(k);
}

Eigen::MatrixXd dense_fatigued(const Eigen::MatrixXd& h, const Eigen::VectorXd& k) {
  Eigen::MatrixXd hf = k.asDiagonal() * h;
  for (Eigen::Index j = 0; j < hf.cols(); ++j) {
    const double s = hf.col(j).sum();
    if (s > 0) hf.col(j) /= s;
  }
  return hf;
}

Eigen::MatrixXd google_matrix(const Eigen::MatrixXd& h, double alpha) {
  const auto n = h.rows();
  Eigen::MatrixXd m = h;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (h.col(j).sum() == 0) m.col(j).setConstant(1.0 / double(n));
  }
  return alpha * m + Eigen::MatrixXd::Constant(n, n, (1.0 - alpha) / double(n));
}

DenseRun dense_power_iteration(const Eigen::MatrixXd& m, double epsilon, std::size_t max_iterations) {
  DenseRun run;
  run.r = Eigen::VectorXd::Constant(m.rows(), 1.0 / double(m.rows()));
  while (run.iterations < max_iterations) {
    Eigen::VectorXd next = m * run.r;
    next /= next.lpNorm<1>();
    const double residual = (next - run.r).norm();
    run.r = next;
    ++run.iterations;
    if (residual < epsilon) {
      run.converged = true;
      break;
    }
  }
  return run;
}

Eigen::VectorXd leading_eigenvector(const Eigen::MatrixXd& sym) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  Eigen::VectorXd v = solver.eigenvectors().col(sym.rows() - 1);
  if (v.sum() < 0) v = -v;
  return v.normalized();
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

double brute_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = double(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

std::vector<double> brute_ranks(const std::vector<double>& x) {
  std::vector<double> ranks(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double less = 0, equal = 0;
    for (double v : x) {
      if (v < x[i]) ++less;
      if (v == x[i]) ++equal;
    }
    ranks[i] = less + (equal + 1) / 2.0;
  }
  return ranks;
}

double brute_spearman(const std::vector<double>& x, const std::vector<double>& y) {
  return brute_pearson(brute_ranks(x), brute_ranks(y));
}

double two_pass_variance(const std::vector<double>& v) {
  double mean = 0;
  for (double x : v) mean += x;
  mean /= double(v.size());
  double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return ss / double(v.size());
}

std::string temp_path(const std::string& name) {
  static std::atomic<int> counter{0};
  const auto dir = std::filesystem::temp_directory_path() / "noderank-tests";
  std::filesystem::create_directories(dir);
  return (dir / (std::to_string(::getpid()) + "-" + std::to_string(counter++) + "-" + name)).string();
}

}  // namespace noderank::testing
