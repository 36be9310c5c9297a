#pragma once

#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "mcsense/multicoset.hpp"
#include "mcsense/spectrum_model.hpp"

namespace mcsense {

/// p x p Hermitian sample correlation of the snapshot vectors.
class SampleCorrelation {
 public:
  /// Symmetrizes (R + R^*)/2. Throws InvalidSpec for a non-square matrix.
  SampleCorrelation(Eigen::MatrixXcd matrix, int snapshots);

  const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }
  int snapshots() const noexcept { return snapshots_; }
  int size() const noexcept { return static_cast<int>(matrix_.rows()); }
  double trace() const { return matrix_.trace().real(); }

 private:
  Eigen::MatrixXcd matrix_;
  int snapshots_;
};

/// R = (1/M) sum_m x_d(m) x_d^*(m).
SampleCorrelation sample_correlation(const SnapshotMatrix& snap);

/// A(b)(i,k) = exp(j2pi c_i b_k / L). The bandwidth scalar is dropped: only
/// the column space of A enters the criterion.
struct ModulationMatrix {
  Eigen::MatrixXcd matrix;
  CosetPattern pattern;
  ActiveChannelSet channels;
};

/// Column of A for one channel.
Eigen::VectorXcd steering_vector(int channel, const CosetPattern& pattern);

/// Throws EmptySet for an empty b and InvalidSpec when |b| > p.
ModulationMatrix modulation_matrix(const ActiveChannelSet& b, const CosetPattern& pattern);

/// Orthonormal basis of the column space of A by modified Gram-Schmidt with
/// one reorthogonalization pass. Throws RankDeficient when a column's
/// residual falls below 1e-8 * sqrt(p).
Eigen::MatrixXcd orthonormal_basis(const Eigen::MatrixXcd& A);

/// P = A A^+, built from orthonormal_basis().
Eigen::MatrixXcd column_space_projector(const Eigen::MatrixXcd& A);

/// J = tr{(I - A A^+) R}. J(empty) = tr R.
double lse_criterion(const SampleCorrelation& R, const Eigen::MatrixXcd& A);
double lse_criterion(const SampleCorrelation& R, const ActiveChannelSet& b,
                     const CosetPattern& pattern);

enum class Termination { ThresholdMet, NmaxReached, PExhausted };

std::string_view to_string(Termination t);

struct DetectionStep {
  int channel;       // channel admitted at this step
  double j;          // J(b_i) after admission
  double threshold;  // (p - i) sigma^2
};

struct DetectionResult {
  ActiveChannelSet b_hat;
  int n_hat = 0;
  std::vector<DetectionStep> steps;  // discovery order (greedy only)
  double initial_j = 0.0;            // J(empty) = tr R
  double final_j = 0.0;              // J(b_hat)
  Termination terminated_by = Termination::ThresholdMet;
  double sigma2 = 0.0;
  CosetPattern pattern;
};

/// Relative guard on every threshold comparison, scaled by p * sigma^2.
inline constexpr double kThresholdGuard = 1e-10;

/// Sequential forward selection. Starting from the empty set, each step
/// admits the channel minimizing J(b_i U {b}); the loop continues while
/// J(b_i) > (p - i) sigma^2, and also stops at i == max_occupied or
/// i == p - 1. Ties within 1e-12 relative go to the lower channel index.
///
/// Requires sigma2 > 0 and max_occupied < p.
DetectionResult sequential_forward_nlls(const SampleCorrelation& R, const CosetPattern& pattern,
                                        double sigma2, int max_occupied);

/// Exhaustive search for the smallest b with J(b) + |b| sigma^2 <= p sigma^2,
/// ties broken by smaller J then lexicographic order. If no subset of size
/// <= max_occupied qualifies, returns the best subset of size max_occupied
/// with Termination::NmaxReached. Throws SearchSpaceTooLarge above 1e6
/// candidate subsets.
DetectionResult exhaustive_nlls(const SampleCorrelation& R, const CosetPattern& pattern,
                                double sigma2, int max_occupied);

/// Extension: noise variance as the mean of the p - max_occupied smallest
/// eigenvalues of R. The detector itself takes sigma^2 as known.
double estimate_noise_variance(const SampleCorrelation& R, int max_occupied);

}  // namespace mcsense
