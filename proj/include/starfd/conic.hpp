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

#ifndef STARFD_CONIC_HPP
#define STARFD_CONIC_HPP

#include <Eigen/Dense>
#include <limits>
#include <vector>

namespace starfd::conic {

/// Affine functional of the program variables:
///   value = constant + scalar_coeffs . s + sum_b Re Tr(block_coeffs[b] * X_b)
/// Block coefficient matrices must be Hermitian (they are symmetrized on
/// intake). An empty matrix or vector stands for a zero coefficient.
struct AffineExpr {
    double constant = 0.0;
    Eigen::VectorXd scalar_coeffs;
    std::vector<Eigen::MatrixXcd> block_coeffs;
};

/// weight * log2(arg); weight must be strictly positive so the maximized
/// objective stays concave.
struct LogTerm {
    double weight = 1.0;
    AffineExpr arg;
};

enum class SolveStatus { kOptimal, kInfeasible, kNumericalFailure };

/// maximize  sum_i log_terms[i] + affine_objective
/// subject to inequalities[j] >= 0, equalities[k] == 0,
///            scalar bounds, X_b Hermitian PSD.
struct ConicProgram {
    int num_scalars = 0;
    Eigen::VectorXd scalar_lower;  // -inf entries allowed
    Eigen::VectorXd scalar_upper;  // +inf entries allowed
    std::vector<int> block_dims;

    std::vector<LogTerm> log_terms;
    AffineExpr affine_objective;
    std::vector<AffineExpr> inequalities;
    std::vector<AffineExpr> equalities;

    // Optional warm start. Scalars should lie within bounds and equalities
    // should hold; blocks need only be Hermitian (phase I restores
    // positivity when required).
    bool has_initial = false;
    Eigen::VectorXd initial_scalars;
    std::vector<Eigen::MatrixXcd> initial_blocks;
};

struct SolverSettings {
    double tolerance = 1e-8;    // absolute gap target on the objective
    int max_iterations = 20000; // total Newton iterations across both phases
};

struct Solution {
    SolveStatus status = SolveStatus::kNumericalFailure;
    Eigen::VectorXd scalar_values;               // present iff optimal
    std::vector<Eigen::MatrixXcd> matrix_values; // present iff optimal
    double objective_value = 0.0;
};

/// Path-following barrier solver for the program class above. Equality
/// constraints are kept exactly; inequality, bound and PSD constraints are
/// satisfied strictly at the returned point; the objective is within
/// `tolerance` of the optimum on success.
Solution solve(const ConicProgram& prog, const SolverSettings& settings = {});

/// Real symmetric embedding [[Re, -Im], [Im, Re]] of a Hermitian matrix.
/// PSD is preserved both ways; every eigenvalue doubles its multiplicity.
Eigen::MatrixXd real_embedding(const Eigen::MatrixXcd& h);

/// Inverse of real_embedding (averages the redundant blocks).
Eigen::MatrixXcd from_real_embedding(const Eigen::MatrixXd& s);

inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace starfd::conic

#endif
