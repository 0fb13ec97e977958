#include "ersg/game.hpp"

#include <cmath>
#include <sstream>

namespace ersg {

Game::Game(int num_states, int num_actions_p1, int num_actions_p2)
    : num_states_(num_states),
      max_a1_(num_actions_p1),
      max_a2_(num_actions_p2),
      a1_at_(num_states, num_actions_p1),
      a2_at_(num_states, num_actions_p2),
      payoff_(num_states),
      trans_(num_states),
      terminal_(Vector::Zero(num_states)),
      labels_(num_states) {
  if (num_states <= 0 || num_actions_p1 <= 0 || num_actions_p2 <= 0)
    throw std::invalid_argument("game dimensions must be positive");
  for (int x = 0; x < num_states; ++x) {
    payoff_[x] = Matrix::Zero(num_actions_p1, num_actions_p2);
    trans_[x] = RowMatrix::Zero(num_actions_p1 * num_actions_p2, num_states);
  }
}

void Game::set_actions_at(int x, int a1, int a2) {
  if (finalized_) throw std::logic_error("game is finalized");
  if (a1 < 1 || a1 > max_a1_ || a2 < 1 || a2 > max_a2_)
    throw std::invalid_argument("per-state action count out of range");
  a1_at_[x] = a1;
  a2_at_[x] = a2;
  payoff_[x] = Matrix::Zero(a1, a2);
  trans_[x] = RowMatrix::Zero(a1 * a2, num_states_);
}

void Game::set_transition(int x, int u, int w, const Vector& next_probs) {
  if (finalized_) throw std::logic_error("game is finalized");
  if (next_probs.size() != num_states_)
    throw std::invalid_argument("kernel row has wrong length");
  trans_[x].row(u * a2_at_[x] + w) = next_probs.transpose();
}

void Game::set_payoff(int x, int u, int w, double r) {
  if (finalized_) throw std::logic_error("game is finalized");
  payoff_[x](u, w) = r;
}

void Game::set_terminal_payoff(const Vector& v) {
  if (finalized_) throw std::logic_error("game is finalized");
  if (v.size() != num_states_)
    throw std::invalid_argument("terminal payoff has wrong length");
  terminal_ = v;
}

void Game::set_label(int x, const std::string& label) {
  if (finalized_) throw std::logic_error("game is finalized");
  labels_[x] = label;
}

void Game::finalize() {
  if (finalized_) return;
  max_abs_payoff_ = 0.0;
  sparse_.assign(num_states_, {});
  for (int x = 0; x < num_states_; ++x) {
    max_abs_payoff_ = std::max(max_abs_payoff_, payoff_[x].cwiseAbs().maxCoeff());
    const RowMatrix& t = trans_[x];
    int nnz = 0;
    for (int r = 0; r < t.rows(); ++r)
      for (int y = 0; y < num_states_; ++y)
        if (t(r, y) != 0.0) ++nnz;
    if (nnz * 4 < t.rows() * num_states_) {
      sparse_[x].resize(t.rows());
      for (int r = 0; r < t.rows(); ++r)
        for (int y = 0; y < num_states_; ++y)
          if (t(r, y) != 0.0) {
            sparse_[x][r].idx.push_back(y);
            sparse_[x][r].val.push_back(t(r, y));
          }
    }
  }
  max_abs_payoff_ = std::max(max_abs_payoff_, terminal_.cwiseAbs().maxCoeff());
  finalized_ = true;
}

Vector Game::expected_next(int x, const Vector& v) const {
  if (!sparse_[x].empty()) {
    Vector out(trans_[x].rows());
    for (size_t r = 0; r < sparse_[x].size(); ++r) {
      double acc = 0.0;
      const SparseRow& row = sparse_[x][r];
      for (size_t k = 0; k < row.idx.size(); ++k) acc += row.val[k] * v[row.idx[k]];
      out[static_cast<Eigen::Index>(r)] = acc;
    }
    return out;
  }
  return trans_[x] * v;
}

std::vector<std::string> validate_game(const Game& g) {
  std::vector<std::string> out;
  auto report = [&out](const std::string& msg) {
    if (out.size() < 200) out.push_back(msg);
  };
  for (int x = 0; x < g.num_states(); ++x) {
    for (int u = 0; u < g.actions_p1_at(x); ++u)
      for (int w = 0; w < g.actions_p2_at(x); ++w) {
        if (!std::isfinite(g.payoff(x, u, w))) {
          std::ostringstream s;
          s << "payoff(" << x << "," << u << "," << w << ") is not finite";
          report(s.str());
        }
        double sum = 0.0;
        for (int y = 0; y < g.num_states(); ++y) {
          double p = g.transition(x, u, w, y);
          if (p < 0.0 || !std::isfinite(p)) {
            std::ostringstream s;
            s << "transition(" << x << "," << u << "," << w << " -> " << y
              << ") = " << p << " is negative or not finite";
            report(s.str());
          }
          sum += p;
        }
        if (std::abs(sum - 1.0) > kProbTol) {
          std::ostringstream s;
          s << "kernel row (" << x << "," << u << "," << w << ") sums to "
            << sum << ", expected 1";
          report(s.str());
        }
      }
    if (!std::isfinite(g.terminal_payoff()[x])) {
      std::ostringstream s;
      s << "terminal payoff at state " << x << " is not finite";
      report(s.str());
    }
  }
  return out;
}

StationaryStrategy uniform_strategy(const Game& g, int player) {
  if (player != 1 && player != 2)
    throw std::invalid_argument("player must be 1 or 2");
  StationaryStrategy s;
  s.dist.resize(g.num_states());
  for (int x = 0; x < g.num_states(); ++x) {
    int k = player == 1 ? g.actions_p1_at(x) : g.actions_p2_at(x);
    s.dist[x] = Vector::Constant(k, 1.0 / k);
  }
  return s;
}

bool is_distribution(const Vector& p, int expected_size) {
  if (p.size() != expected_size) return false;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0 || !std::isfinite(p[i])) return false;
    sum += p[i];
  }
  return std::abs(sum - 1.0) <= kProbTol;
}

void require_distribution(const Vector& p, int expected_size, const char* what) {
  if (!is_distribution(p, expected_size)) {
    std::ostringstream s;
    s << what << " is not a valid probability distribution of size "
      << expected_size;
    throw std::invalid_argument(s.str());
  }
}

}  // namespace ersg
