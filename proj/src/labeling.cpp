#include "greenrisk/labeling.hpp"

#include "greenrisk/common.hpp"
#include "greenrisk/text.hpp"

#include "json.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace greenrisk {

namespace {

using nlohmann::json;

constexpr std::size_t kUnknowns = 4;

// Cyclic Jacobi eigendecomposition of a symmetric 4x4 matrix.
// Returns eigenvalues in `diag` and eigenvectors as columns of `vecs`.
void jacobi_eigen(std::array<std::array<double, kUnknowns>, kUnknowns> m,
                  std::array<double, kUnknowns>& diag,
                  std::array<std::array<double, kUnknowns>, kUnknowns>& vecs) {
    for (std::size_t i = 0; i < kUnknowns; ++i) {
        for (std::size_t j = 0; j < kUnknowns; ++j) {
            vecs[i][j] = (i == j) ? 1.0 : 0.0;
        }
    }
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < kUnknowns; ++p) {
            for (std::size_t q = p + 1; q < kUnknowns; ++q) {
                off += m[p][q] * m[p][q];
            }
        }
        if (off < 1e-30) {
            break;
        }
        for (std::size_t p = 0; p < kUnknowns; ++p) {
            for (std::size_t q = p + 1; q < kUnknowns; ++q) {
                if (std::fabs(m[p][q]) < 1e-300) {
                    continue;
                }
                const double theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < kUnknowns; ++k) {
                    const double mkp = m[k][p];
                    const double mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for (std::size_t k = 0; k < kUnknowns; ++k) {
                    const double mpk = m[p][k];
                    const double mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for (std::size_t k = 0; k < kUnknowns; ++k) {
                    const double vkp = vecs[k][p];
                    const double vkq = vecs[k][q];
                    vecs[k][p] = c * vkp - s * vkq;
                    vecs[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    for (std::size_t i = 0; i < kUnknowns; ++i) {
        diag[i] = m[i][i];
    }
}

std::array<double, kUnknowns> attribute_row(const AttributeVector& attrs) {
    return {static_cast<double>(attrs.sentiment), static_cast<double>(attrs.commitment),
            static_cast<double>(attrs.specificity), static_cast<double>(attrs.hedging)};
}

} // namespace

std::string_view scheme_name(Scheme s) {
    return s == Scheme::eq1 ? "eq1" : "eq2";
}

Scheme scheme_from_name(std::string_view name) {
    if (name == "eq1") {
        return Scheme::eq1;
    }
    if (name == "eq2") {
        return Scheme::eq2;
    }
    throw Error("unknown scheme: " + std::string(name));
}

RiskCoefficients load_coefficients(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open coefficients file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        const json obj = json::parse(buffer.str());
        RiskCoefficients coeffs;
        coeffs.w_sentiment = obj.at("w_sentiment").get<double>();
        coeffs.w_commitment = obj.at("w_commitment").get<double>();
        coeffs.w_specificity = obj.at("w_specificity").get<double>();
        coeffs.w_hedging = obj.at("w_hedging").get<double>();
        coeffs.threshold = obj.at("threshold").get<double>();
        coeffs.scheme = scheme_from_name(obj.at("scheme").get<std::string>());
        return coeffs;
    } catch (const json::exception& e) {
        throw Error("bad coefficients file " + path + ": " + e.what());
    }
}

void save_coefficients(const RiskCoefficients& coeffs, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write coefficients file: " + path);
    }
    json obj;
    obj["w_sentiment"] = coeffs.w_sentiment;
    obj["w_commitment"] = coeffs.w_commitment;
    obj["w_specificity"] = coeffs.w_specificity;
    obj["w_hedging"] = coeffs.w_hedging;
    obj["threshold"] = coeffs.threshold;
    obj["scheme"] = std::string(scheme_name(coeffs.scheme));
    out << obj.dump(2) << '\n';
}

double raw_score_eq1(const AttributeVector& attrs, const RiskCoefficients& coeffs) {
    if (coeffs.scheme != Scheme::eq1) {
        throw Error("raw_score_eq1 requires scheme eq1");
    }
    return coeffs.w_sentiment * attrs.sentiment + coeffs.w_commitment * attrs.commitment +
           coeffs.w_specificity * attrs.specificity + coeffs.w_hedging * attrs.hedging;
}

Eq1Label label_eq1(const AttributeVector& attrs, const RiskCoefficients& coeffs) {
    if (!(coeffs.threshold > 0.0 && coeffs.threshold < 1.0)) {
        throw Error("eq1 threshold must be in (0,1)");
    }
    Eq1Label result;
    result.probability = stable_sigmoid(raw_score_eq1(attrs, coeffs));
    result.label = result.probability >= coeffs.threshold ? 1 : 0;
    return result;
}

int label_eq2(const AttributeVector& attrs) {
    const int x = -attrs.sentiment + attrs.commitment + attrs.specificity + attrs.hedging;
    return x <= 0 ? 1 : 0;
}

LabelOutcome apply_scheme(const AttributeVector& attrs, const RiskCoefficients& coeffs) {
    LabelOutcome outcome;
    if (coeffs.scheme == Scheme::eq1) {
        const Eq1Label eq1 = label_eq1(attrs, coeffs);
        outcome.label = eq1.label;
        outcome.probability = eq1.probability;
    } else {
        outcome.label = label_eq2(attrs);
    }
    return outcome;
}

std::vector<DatasetRecord> generate_labels(std::vector<DatasetRecord> records,
                                           const RiskCoefficients& coeffs) {
    for (auto& record : records) {
        const LabelOutcome outcome = apply_scheme(record.attributes, coeffs);
        record.label = outcome.label;
        record.probability = outcome.probability;
    }
    return records;
}

std::vector<AnnotatedExemplar> load_exemplars(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open exemplars file: " + path);
    }
    std::vector<AnnotatedExemplar> exemplars;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        try {
            const json obj = json::parse(line);
            AnnotatedExemplar ex;
            ex.text = obj.value("text", std::string{});
            const json& attrs = obj.at("attributes");
            auto binary = [&](const char* key) {
                const int v = attrs.at(key).get<int>();
                if (v != 0 && v != 1) {
                    throw Error("exemplar line " + std::to_string(line_no) + ": " + key +
                                " must be 0 or 1");
                }
                return v;
            };
            ex.attributes.sentiment = binary("sentiment");
            ex.attributes.commitment = binary("commitment");
            ex.attributes.specificity = binary("specificity");
            ex.attributes.hedging = binary("hedging");
            ex.expert_label = obj.at("label").get<int>();
            if (ex.expert_label != 0 && ex.expert_label != 1) {
                throw Error("exemplar line " + std::to_string(line_no) +
                            ": label must be 0 or 1");
            }
            exemplars.push_back(std::move(ex));
        } catch (const json::exception& e) {
            throw Error("exemplar line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return exemplars;
}

LeastSquaresSolution least_squares_min_norm(const std::vector<std::array<double, 4>>& rows,
                                            const std::vector<double>& y) {
    if (rows.size() != y.size()) {
        throw Error("least squares: rows and labels differ in length");
    }
    if (rows.empty()) {
        throw Error("least squares: empty system");
    }

    // Normal-equation data: G = A^T A, g = A^T y.
    std::array<std::array<double, kUnknowns>, kUnknowns> gram{};
    std::array<double, kUnknowns> rhs{};
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t i = 0; i < kUnknowns; ++i) {
            rhs[i] += rows[r][i] * y[r];
            for (std::size_t j = 0; j < kUnknowns; ++j) {
                gram[i][j] += rows[r][i] * rows[r][j];
            }
        }
    }

    std::array<double, kUnknowns> eigenvalues{};
    std::array<std::array<double, kUnknowns>, kUnknowns> eigenvectors{};
    jacobi_eigen(gram, eigenvalues, eigenvectors);

    double max_eigen = 0.0;
    for (double ev : eigenvalues) {
        max_eigen = std::max(max_eigen, std::fabs(ev));
    }
    const double rank_tol = max_eigen * 1e-10;

    // w = pinv(G) * g = sum over lambda_i > tol of (v_i . g / lambda_i) v_i,
    // which is the minimum-norm least-squares solution.
    LeastSquaresSolution solution;
    for (std::size_t i = 0; i < kUnknowns; ++i) {
        if (eigenvalues[i] <= rank_tol) {
            continue;
        }
        double projection = 0.0;
        for (std::size_t k = 0; k < kUnknowns; ++k) {
            projection += eigenvectors[k][i] * rhs[k];
        }
        const double scale = projection / eigenvalues[i];
        for (std::size_t k = 0; k < kUnknowns; ++k) {
            solution.weights[k] += scale * eigenvectors[k][i];
        }
    }

    double residual_sq = 0.0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        double fitted = 0.0;
        for (std::size_t i = 0; i < kUnknowns; ++i) {
            fitted += rows[r][i] * solution.weights[i];
        }
        const double diff = fitted - y[r];
        residual_sq += diff * diff;
    }
    solution.residual_norm = std::sqrt(residual_sq);
    return solution;
}

FitResult fit_coefficients(const std::vector<AnnotatedExemplar>& exemplars,
                           double threshold) {
    if (exemplars.size() < kUnknowns) {
        throw Error("underdetermined fit: need at least 4 exemplars, got " +
                    std::to_string(exemplars.size()));
    }
    std::vector<std::array<double, 4>> rows;
    std::vector<double> labels;
    rows.reserve(exemplars.size());
    labels.reserve(exemplars.size());
    for (const auto& ex : exemplars) {
        rows.push_back(attribute_row(ex.attributes));
        labels.push_back(static_cast<double>(ex.expert_label));
    }
    const LeastSquaresSolution solution = least_squares_min_norm(rows, labels);

    FitResult result;
    result.coefficients.w_sentiment = solution.weights[0];
    result.coefficients.w_commitment = solution.weights[1];
    result.coefficients.w_specificity = solution.weights[2];
    result.coefficients.w_hedging = solution.weights[3];
    result.coefficients.threshold = threshold;
    result.coefficients.scheme = Scheme::eq1;
    result.residual_norm = solution.residual_norm;
    result.n_exemplars = exemplars.size();
    return result;
}

} // namespace greenrisk
