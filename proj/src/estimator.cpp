#include "mcsense/estimator.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mcsense/error.hpp"

namespace mcsense {

namespace {

constexpr double kRankTolerance = 1e-8;
constexpr double kTieTolerance = 1e-12;

// Removes the components of v along the orthonormal columns of Q (two passes).
// Returns the residual norm before normalization; v holds the unit residual.
double orthogonalize(const Eigen::MatrixXcd& Q, Eigen::Index cols, Eigen::VectorXcd& v) {
  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index k = 0; k < cols; ++k) {
      v -= Q.col(k) * Q.col(k).dot(v);
    }
  }
  const double norm = v.norm();
  if (norm > 0.0) v /= norm;
  return norm;
}

bool continues(double j, double threshold, double scale) {
  return j > threshold + kThresholdGuard * scale;
}

void check_detector_args(const SampleCorrelation& R, const CosetPattern& pattern, double sigma2,
                         int max_occupied) {
  if (R.size() != pattern.size()) {
    throw Error(ErrorKind::InvalidSpec, "correlation size does not match the coset pattern");
  }
  if (!(sigma2 > 0.0)) throw Error(ErrorKind::InvalidSpec, "sigma2 must be positive");
  if (max_occupied < 1 || max_occupied >= pattern.size()) {
    throw Error(ErrorKind::InvalidSpec, "need 1 <= N_max < p");
  }
}

}  // namespace

SampleCorrelation::SampleCorrelation(Eigen::MatrixXcd matrix, int snapshots)
    : matrix_(std::move(matrix)), snapshots_(snapshots) {
  if (matrix_.rows() != matrix_.cols()) {
    throw Error(ErrorKind::InvalidSpec, "correlation matrix must be square");
  }
  matrix_ = (0.5 * (matrix_ + matrix_.adjoint())).eval();
}

SampleCorrelation sample_correlation(const SnapshotMatrix& snap) {
  const auto& X = snap.entries;
  const int M = static_cast<int>(X.cols());
  if (M < 1) throw Error(ErrorKind::InvalidSpec, "need at least one snapshot");
  return SampleCorrelation((X * X.adjoint()) / static_cast<double>(M), M);
}

Eigen::VectorXcd steering_vector(int channel, const CosetPattern& pattern) {
  const int p = pattern.size();
  const double L = pattern.channels();
  Eigen::VectorXcd a(p);
  for (int i = 0; i < p; ++i) {
    // reduce c*b mod L first so the phase argument stays small
    const int cb = (pattern.cosets()[i] * channel) % pattern.channels();
    a(i) = std::polar(1.0, 2.0 * std::numbers::pi * cb / L);
  }
  return a;
}

ModulationMatrix modulation_matrix(const ActiveChannelSet& b, const CosetPattern& pattern) {
  if (b.empty()) throw Error(ErrorKind::EmptySet, "modulation matrix of an empty channel set");
  if (b.size() > pattern.size()) {
    throw Error(ErrorKind::InvalidSpec, "more channels than cosets");
  }
  if (b.indices().back() >= pattern.channels()) {
    throw Error(ErrorKind::IndexOutOfRange, "channel index outside the pattern's L");
  }
  Eigen::MatrixXcd A(pattern.size(), b.size());
  for (int k = 0; k < b.size(); ++k) A.col(k) = steering_vector(b.indices()[k], pattern);
  return {std::move(A), pattern, b};
}

Eigen::MatrixXcd orthonormal_basis(const Eigen::MatrixXcd& A) {
  Eigen::MatrixXcd Q(A.rows(), A.cols());
  for (Eigen::Index k = 0; k < A.cols(); ++k) {
    Eigen::VectorXcd v = A.col(k);
    // relative to the column norm, which is sqrt(p) for unit-modulus entries
    const double scale = v.norm();
    if (!(scale > 0.0) || orthogonalize(Q, k, v) < kRankTolerance * scale) {
      throw Error(ErrorKind::RankDeficient,
                  "column " + std::to_string(k) + " is linearly dependent on earlier columns");
    }
    Q.col(k) = v;
  }
  return Q;
}

Eigen::MatrixXcd column_space_projector(const Eigen::MatrixXcd& A) {
  const auto Q = orthonormal_basis(A);
  return Q * Q.adjoint();
}

double lse_criterion(const SampleCorrelation& R, const Eigen::MatrixXcd& A) {
  if (A.cols() == 0) return R.trace();
  if (A.rows() != R.size()) {
    throw Error(ErrorKind::InvalidSpec, "modulation matrix rows do not match correlation size");
  }
  const auto Q = orthonormal_basis(A);
  const double captured = (Q.adjoint() * R.matrix() * Q).trace().real();
  return R.trace() - captured;
}

double lse_criterion(const SampleCorrelation& R, const ActiveChannelSet& b,
                     const CosetPattern& pattern) {
  if (b.empty()) return R.trace();
  return lse_criterion(R, modulation_matrix(b, pattern).matrix);
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::ThresholdMet: return "threshold-met";
    case Termination::NmaxReached: return "Nmax-reached";
    case Termination::PExhausted: return "p-exhausted";
  }
  return "unknown";
}

DetectionResult sequential_forward_nlls(const SampleCorrelation& R, const CosetPattern& pattern,
                                        double sigma2, int max_occupied) {
  check_detector_args(R, pattern, sigma2, max_occupied);
  const int p = pattern.size();
  const int L = pattern.channels();
  const double floor = kRankTolerance;  // residual of a unit-norm steering vector
  const double scale = p * sigma2;

  // Steering vectors normalized to unit length; the projector is scale-free.
  std::vector<Eigen::VectorXcd> steering(L);
  for (int r = 0; r < L; ++r) steering[r] = steering_vector(r, pattern) / std::sqrt(double(p));

  DetectionResult result{.pattern = pattern};
  result.sigma2 = sigma2;
  result.initial_j = R.trace();

  Eigen::MatrixXcd basis(p, p);
  std::vector<int> chosen;
  std::vector<bool> used(L, false);
  double j_current = result.initial_j;
  result.terminated_by = Termination::PExhausted;

  for (int i = 1; i <= p - 1; ++i) {
    int best = -1;
    double best_j = 0.0;
    Eigen::VectorXcd best_dir;
    const auto cols = static_cast<Eigen::Index>(chosen.size());
    for (int r = 0; r < L; ++r) {
      if (used[r]) continue;
      Eigen::VectorXcd u = steering[r];
      if (orthogonalize(basis, cols, u) < floor) continue;  // rank-deficient candidate
      const double j = j_current - u.dot(R.matrix() * u).real();
      if (best < 0 || j < best_j - kTieTolerance * std::abs(best_j)) {
        best = r;
        best_j = j;
        best_dir = std::move(u);
      }
    }
    if (best < 0) break;  // every remaining candidate is degenerate

    basis.col(cols) = best_dir;
    chosen.push_back(best);
    used[best] = true;
    j_current = best_j;
    const double threshold = (p - i) * sigma2;
    result.steps.push_back({best, best_j, threshold});

    if (!continues(best_j, threshold, scale)) {
      result.terminated_by = Termination::ThresholdMet;
      break;
    }
    if (i == max_occupied) {
      result.terminated_by = Termination::NmaxReached;
      break;
    }
  }

  result.b_hat = ActiveChannelSet(chosen, L);
  result.n_hat = static_cast<int>(chosen.size());
  result.final_j = j_current;
  return result;
}

DetectionResult exhaustive_nlls(const SampleCorrelation& R, const CosetPattern& pattern,
                                double sigma2, int max_occupied) {
  check_detector_args(R, pattern, sigma2, max_occupied);
  const int p = pattern.size();
  const int L = pattern.channels();
  const double scale = p * sigma2;

  double candidates = 0.0;
  double binom = 1.0;
  for (int k = 0; k <= max_occupied; ++k) {
    candidates += binom;
    binom = binom * (L - k) / (k + 1);
  }
  if (candidates > 1e6) {
    throw Error(ErrorKind::SearchSpaceTooLarge,
                "exhaustive search over " + std::to_string(candidates) + " subsets");
  }

  DetectionResult result{.pattern = pattern};
  result.sigma2 = sigma2;
  result.initial_j = R.trace();

  if (!continues(result.initial_j, p * sigma2, scale)) {
    result.final_j = result.initial_j;
    result.terminated_by = Termination::ThresholdMet;
    return result;
  }

  // Within one cardinality the threshold is fixed, so the min-J subset is
  // accepted whenever any subset of that size is.
  std::vector<int> best_set;
  double best_j = 0.0;
  for (int n = 1; n <= max_occupied; ++n) {
    best_set.clear();
    std::vector<int> combo(n);
    for (int k = 0; k < n; ++k) combo[k] = k;
    while (true) {
      try {
        const double j = lse_criterion(R, ActiveChannelSet(combo, L), pattern);
        if (best_set.empty() || j < best_j - kTieTolerance * std::abs(best_j)) {
          best_set = combo;
          best_j = j;
        }
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::RankDeficient) throw;
      }
      int k = n - 1;
      while (k >= 0 && combo[k] == L - n + k) --k;
      if (k < 0) break;
      ++combo[k];
      for (int t = k + 1; t < n; ++t) combo[t] = combo[t - 1] + 1;
    }
    if (!best_set.empty() && !continues(best_j, (p - n) * sigma2, scale)) {
      result.terminated_by = Termination::ThresholdMet;
      break;
    }
    result.terminated_by = Termination::NmaxReached;
  }

  result.b_hat = ActiveChannelSet(best_set, L);
  result.n_hat = result.b_hat.size();
  result.final_j = best_set.empty() ? result.initial_j : best_j;
  return result;
}

double estimate_noise_variance(const SampleCorrelation& R, int max_occupied) {
  const int p = R.size();
  if (max_occupied < 0 || max_occupied >= p) {
    throw Error(ErrorKind::InvalidSpec, "need 0 <= N_max < p for the noise estimate");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(R.matrix(), Eigen::EigenvaluesOnly);
  const auto& values = eig.eigenvalues();  // ascending
  double sum = 0.0;
  for (int k = 0; k < p - max_occupied; ++k) sum += values(k);
  return sum / (p - max_occupied);
}

}  // namespace mcsense
