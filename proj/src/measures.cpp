#include "mqh/measures.hpp"

#include <cmath>
#include <cstddef>
#include <string>

#include "mqh/errors.hpp"

namespace mqh {

namespace {

constexpr double kSumTol = 1e-12;

void check_normalized(const std::vector<double>& atoms) {
    if (atoms.empty()) throw Error("measure needs at least one atom");
    double sum = 0.0;
    for (double a : atoms) sum += a;
    if (std::fabs(sum - 1.0) > kSumTol)
        throw NotNormalized("atoms sum to " + std::to_string(sum) + ", expected 1");
}

}  // namespace

DiscreteMeasure DiscreteMeasure::validated(std::vector<double> atoms) {
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (!(atoms[i] > 0.0))
            throw ZeroAtom("atom " + std::to_string(i + 1) + " is not strictly positive");
    }
    check_normalized(atoms);
    return DiscreteMeasure(std::move(atoms));
}

DiscreteMeasure DiscreteMeasure::with_boundary_levels(std::vector<double> atoms) {
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (atoms[i] < 0.0) throw ZeroAtom("atom " + std::to_string(i + 1) + " is negative");
    }
    check_normalized(atoms);
    return DiscreteMeasure(std::move(atoms));
}

double DiscreteMeasure::atom(int level) const {
    if (level < 1 || level > size()) throw IndexOutOfRange("level " + std::to_string(level));
    return atoms_[static_cast<std::size_t>(level - 1)];
}

double DiscreteMeasure::survival(int level) const {
    if (level < 1 || level > size()) throw IndexOutOfRange("level " + std::to_string(level));
    if (level == 1) return 1.0;
    double tail = 0.0;
    for (int j = size(); j >= level; --j) tail += atoms_[static_cast<std::size_t>(j - 1)];
    return tail;
}

std::vector<double> DiscreteMeasure::upper_masses() const {
    return std::vector<double>(atoms_.begin() + 1, atoms_.end());
}

SurvivalCurve survival_curve(const DiscreteMeasure& m) {
    SurvivalCurve c;
    c.values.resize(static_cast<std::size_t>(m.size()));
    for (int n = 1; n <= m.size(); ++n) c.values[static_cast<std::size_t>(n - 1)] = m.survival(n);
    return c;
}

bool dominates(const DiscreteMeasure& nu, const DiscreteMeasure& mu) {
    if (nu.size() != mu.size())
        throw DimensionMismatch("dominates: sizes " + std::to_string(nu.size()) + " vs " +
                                std::to_string(mu.size()));
    for (int n = 1; n <= nu.size(); ++n) {
        if (nu.survival(n) < mu.survival(n) - 1e-12) return false;
    }
    return true;
}

std::vector<double> project_to_cone(const std::vector<double>& v) {
    const std::size_t k = v.size();
    std::vector<double> level(k);   // block means
    std::vector<double> weight(k);  // block sizes
    std::size_t blocks = 0;
    for (std::size_t i = 0; i < k; ++i) {
        level[blocks] = v[i];
        weight[blocks] = 1.0;
        ++blocks;
        while (blocks > 1 && level[blocks - 2] > level[blocks - 1]) {
            const double w = weight[blocks - 2] + weight[blocks - 1];
            level[blocks - 2] = (weight[blocks - 2] * level[blocks - 2] +
                                 weight[blocks - 1] * level[blocks - 1]) /
                                w;
            weight[blocks - 2] = w;
            --blocks;
        }
    }
    std::vector<double> out;
    out.reserve(k);
    for (std::size_t b = 0; b < blocks; ++b) {
        const double value = level[b] < 0.0 ? 0.0 : level[b];
        for (double c = 0; c < weight[b]; c += 1.0) out.push_back(value);
    }
    return out;
}

DualPoint DualPoint::projected(const std::vector<double>& v) {
    return DualPoint(project_to_cone(v));
}

DualPoint DualPoint::from_feasible(std::vector<double> v) {
    double prev = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] < prev - 1e-12)
            throw Error("dual point leaves the ordered nonnegative cone at component " +
                        std::to_string(i + 1));
        prev = v[i];
    }
    return DualPoint(std::move(v));
}

}  // namespace mqh
