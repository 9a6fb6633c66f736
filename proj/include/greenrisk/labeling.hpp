#pragma once

#include "greenrisk/corpus.hpp"
#include "greenrisk/lexicon.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace greenrisk {

enum class Scheme { eq1, eq2 };

std::string_view scheme_name(Scheme s);
Scheme scheme_from_name(std::string_view name);

// Weights, sigmoid threshold, and scheme for a labeling equation. Defaults
// are the fitted weights and threshold used throughout the pipeline. Signs
// live inside the weights.
struct RiskCoefficients {
    double w_sentiment = 0.71;
    double w_commitment = 0.14;
    double w_specificity = -0.86;
    double w_hedging = -0.71;
    double threshold = 0.67;
    Scheme scheme = Scheme::eq1;
};

// JSON with keys w_sentiment, w_commitment, w_specificity, w_hedging,
// threshold, scheme.
RiskCoefficients load_coefficients(const std::string& path);
void save_coefficients(const RiskCoefficients& coeffs, const std::string& path);

// w_s*s + w_c*c + w_sp*sp + w_h*h. Requires scheme = eq1.
double raw_score_eq1(const AttributeVector& attrs, const RiskCoefficients& coeffs);

struct Eq1Label {
    int label = 0;
    double probability = 0.0;
};

// probability = sigmoid(raw score); label = 1 iff probability >= threshold
// (inclusive). Requires scheme = eq1 and threshold in (0,1).
Eq1Label label_eq1(const AttributeVector& attrs, const RiskCoefficients& coeffs);

// x = -s + c + sp + h; label = 1 iff x <= 0.
int label_eq2(const AttributeVector& attrs);

struct LabelOutcome {
    int label = 0;
    std::optional<double> probability; // set for eq1 only
};

LabelOutcome apply_scheme(const AttributeVector& attrs, const RiskCoefficients& coeffs);

// Attaches labels (and probabilities for eq1) to every record. Deterministic
// and permutation-equivariant; an empty dataset stays empty.
std::vector<DatasetRecord> generate_labels(std::vector<DatasetRecord> records,
                                           const RiskCoefficients& coeffs);

struct AnnotatedExemplar {
    std::string text;
    AttributeVector attributes;
    int expert_label = 0;
};

// JSONL: {"text","attributes":{...},"label"}.
std::vector<AnnotatedExemplar> load_exemplars(const std::string& path);

struct LeastSquaresSolution {
    std::array<double, 4> weights{};
    double residual_norm = 0.0;
};

// Minimum-norm least-squares solution of A*w = y with four unknowns and no
// intercept, via the pseudo-inverse of A^T A (Jacobi eigendecomposition).
// Rank-deficient systems get the minimum-norm solution, not an error.
LeastSquaresSolution least_squares_min_norm(const std::vector<std::array<double, 4>>& rows,
                                            const std::vector<double>& y);

struct FitResult {
    RiskCoefficients coefficients;
    double residual_norm = 0.0;
    std::size_t n_exemplars = 0;
};

// Least-squares fit of the eq1 weights on expert exemplars. Requires at least
// 4 exemplars (as many as unknowns); the threshold is copied from the
// argument, scheme is eq1.
FitResult fit_coefficients(const std::vector<AnnotatedExemplar>& exemplars,
                           double threshold = 0.67);

} // namespace greenrisk
