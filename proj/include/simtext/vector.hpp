#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "simtext/errors.hpp"

namespace simtext {

/// Fixed-dimension real vector, the unit of similarity comparison.
/// Components must stay finite; a zero-norm vector cannot take part in
/// cosine similarity and is rejected wherever it would be compared.
struct EmbeddingVector {
    std::vector<double> components;

    EmbeddingVector() = default;
    explicit EmbeddingVector(std::vector<double> c) : components(std::move(c)) {}

    std::size_t dim() const { return components.size(); }

    bool all_finite() const {
        return std::all_of(components.begin(), components.end(),
                           [](double v) { return std::isfinite(v); });
    }

    double l2_norm() const {
        double sum = 0.0;
        for (double v : components) sum += v * v;
        return std::sqrt(sum);
    }

    bool is_normalized(double tol = 1e-6) const {
        double n = l2_norm();
        return n >= 1.0 - tol && n <= 1.0 + tol;
    }

    // In-place L2 normalization. Zero-norm input is degenerate.
    void normalize() {
        double n = l2_norm();
        if (n == 0.0 || !std::isfinite(n)) {
            throw DegenerateVector("cannot normalize zero-norm or non-finite vector");
        }
        for (double& v : components) v /= n;
    }
};

// Throws unless the vector is non-empty and fully finite.
inline void require_valid(const EmbeddingVector& v) {
    if (v.dim() == 0) {
        throw DegenerateVector("vector has zero dimension");
    }
    if (!v.all_finite()) {
        throw DegenerateVector("vector has non-finite component");
    }
}

/// Cosine similarity dot(a,b) / (|a|*|b|), clamped to [-1, 1] to absorb
/// floating point rounding. Both vectors must share a dimension and have
/// nonzero norm.
inline double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.dim() != b.dim()) {
        throw DimensionMismatch(a.dim(), b.dim());
    }
    require_valid(a);
    require_valid(b);
    double dot = 0.0;
    double na = 0.0;
    double nb = 0.0;
    for (std::size_t i = 0; i < a.components.size(); ++i) {
        dot += a.components[i] * b.components[i];
        na += a.components[i] * a.components[i];
        nb += b.components[i] * b.components[i];
    }
    if (na == 0.0 || nb == 0.0) {
        throw DegenerateVector("cosine of zero-norm vector");
    }
    double sim = dot / (std::sqrt(na) * std::sqrt(nb));
    return std::clamp(sim, -1.0, 1.0);
}

} // namespace simtext
