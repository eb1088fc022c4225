#include "sgl/feature/feature.hpp"

#include <array>
#include <cmath>

#include "sgl/error.hpp"

namespace sgl::feature {

namespace {

int pm_bit(int v) { return v > 0 ? 1 : 0; }

// cell index over (feat, other, pred, label), each binary
struct CellCounts {
    std::array<double, 16> n{};
    std::size_t total = 0;
};

CellCounts tabulate(const FeatureAssignment& f, const FeatureAssignment& o,
                    const LabeledPrediction& lp) {
    require(f.values.size() == o.values.size() && f.values.size() == lp.labels.size() &&
                lp.labels.size() == lp.preds.size(),
            "ParamError", "feature/label/pred vectors must have equal length");
    CellCounts c;
    c.total = f.values.size();
    for (std::size_t i = 0; i < c.total; ++i) {
        const int idx = (f.values[i] << 3) | (o.values[i] << 2) | (pm_bit(lp.preds[i]) << 1) |
                        pm_bit(lp.labels[i]);
        c.n[static_cast<std::size_t>(idx)] += 1.0;
    }
    return c;
}

} // namespace

const char* feature_class_name(FeatureClass c) {
    switch (c) {
        case FeatureClass::Core: return "core";
        case FeatureClass::Noise: return "noise";
        default: return "other";
    }
}

void validate_assignment(const FeatureAssignment& f, bool require_two_values) {
    require(!f.values.empty(), "ParamError", "feature '" + f.name + "' is empty");
    bool seen[2] = {false, false};
    for (int v : f.values) {
        require(v == 0 || v == 1, "ParamError", "feature '" + f.name + "' has a value outside {0,1}");
        seen[v] = true;
    }
    if (require_two_values)
        require(seen[0] && seen[1], "ParamError",
                "feature '" + f.name + "' takes fewer distinct values than there are classes");
}

void validate_labels(const LabeledPrediction& lp) {
    require(lp.labels.size() == lp.preds.size() && lp.labels.size() >= 2, "ParamError",
            "labels/preds must have equal length >= 2");
    for (std::size_t i = 0; i < lp.labels.size(); ++i) {
        require(lp.labels[i] == 1 || lp.labels[i] == -1, "ParamError", "labels must be in {-1,+1}");
        require(lp.preds[i] == 1 || lp.preds[i] == -1, "ParamError", "preds must be in {-1,+1}");
    }
}

double s_score(const FeatureAssignment& feat_k, const FeatureAssignment& other,
               const LabeledPrediction& lp) {
    validate_assignment(feat_k);
    validate_assignment(other);
    validate_labels(lp);
    const CellCounts c = tabulate(feat_k, other, lp);

    // Conflict pairs have different feat values, so the two endpoints always
    // sit in different cells and i != j is automatic.
    double pairs = 0.0, pred_agree = 0.0, label_agree = 0.0;
    for (int a = 0; a < 16; ++a) {
        for (int b = 0; b < 16; ++b) {
            if (((a >> 3) & 1) == ((b >> 3) & 1)) continue; // feat must differ
            if (((a >> 2) & 1) != ((b >> 2) & 1)) continue; // other must agree
            const double w = c.n[static_cast<std::size_t>(a)] * c.n[static_cast<std::size_t>(b)];
            if (w == 0.0) continue;
            pairs += w;
            if (((a >> 1) & 1) == ((b >> 1) & 1)) pred_agree += w;
            if ((a & 1) == (b & 1)) label_agree += w;
        }
    }
    if (pairs == 0.0)
        fail_pre("EmptyConflictSet",
                 "no pair differs on '" + feat_k.name + "' while agreeing on '" + other.name + "'");
    return (pred_agree - label_agree) / pairs;
}

BiasReport shortcut_bias(const FeatureAssignment& alpha, const FeatureAssignment& beta,
                         const LabeledPrediction& lp) {
    BiasReport r;
    r.s_alpha = s_score(alpha, beta, lp);
    r.s_beta = s_score(beta, alpha, lp);
    r.shortcut_bias = 0.5 * (r.s_beta - r.s_alpha);

    double agree = 0.0;
    for (std::size_t i = 0; i < lp.labels.size(); ++i) {
        if (alpha.values[i] == beta.values[i]) continue;
        ++r.conflict_count;
        if (lp.preds[i] == lp.labels[i]) agree += 1.0;
    }
    check_invariant(r.conflict_count > 0, "conflict pairs exist but no conflicting sample");
    r.conflict_accuracy = agree / static_cast<double>(r.conflict_count);
    return r;
}

double bias_equivalence_check(const FeatureAssignment& alpha, const FeatureAssignment& beta,
                              const LabeledPrediction& lp, double balance_tol) {
    validate_assignment(alpha);
    validate_assignment(beta);
    validate_labels(lp);
    const std::size_t n = lp.labels.size();

    double pos = 0.0, conflict = 0.0, conflict_pos = 0.0;
    std::size_t agreement_miss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (lp.labels[i] == 1) pos += 1.0;
        if (alpha.values[i] != beta.values[i]) {
            conflict += 1.0;
            if (lp.labels[i] == 1) conflict_pos += 1.0;
        } else if (lp.preds[i] != lp.labels[i]) {
            ++agreement_miss;
        }
    }
    if (std::fabs(pos / static_cast<double>(n) - 0.5) > balance_tol)
        fail_pre("PreconditionViolated", "class balance violated");
    if (conflict == 0.0) fail_pre("EmptyConflictSet", "alpha and beta never disagree");
    if (std::fabs(conflict_pos / conflict - 0.5) > balance_tol)
        fail_pre("PreconditionViolated", "conflict-set class balance violated");
    if (agreement_miss > 0)
        fail_pre("PreconditionViolated", "agreement-set accuracy below 1");

    const BiasReport r = shortcut_bias(alpha, beta, lp);
    const double shortcut_agreement = 1.0 - r.conflict_accuracy;
    return std::fabs(shortcut_agreement - r.shortcut_bias);
}

double pair_covariance(const FeatureAssignment& feat, const std::vector<int>& labels) {
    require(feat.values.size() == labels.size() && labels.size() >= 2, "ParamError",
            "feature/labels must have equal length >= 2");
    // 4 cells over (v, y)
    double n_cell[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
    for (std::size_t i = 0; i < labels.size(); ++i)
        n_cell[feat.values[i]][pm_bit(labels[i])] += 1.0;

    const double n = static_cast<double>(labels.size());
    const double pairs = n * (n - 1.0);
    double s_dv = 0.0, s_sy = 0.0, s_prod = 0.0;
    for (int va = 0; va < 2; ++va)
        for (int ya = 0; ya < 2; ++ya)
            for (int vb = 0; vb < 2; ++vb)
                for (int yb = 0; yb < 2; ++yb) {
                    const double same = (va == vb && ya == yb) ? n_cell[va][ya] : 0.0;
                    const double w = n_cell[va][ya] * n_cell[vb][yb] - same;
                    if (w == 0.0) continue;
                    const double dv = (va == vb) ? 1.0 : 0.0;
                    const double sy = (ya == yb) ? 1.0 : -1.0;
                    s_dv += dv * w;
                    s_sy += sy * w;
                    s_prod += dv * sy * w;
                }
    return s_prod / pairs - (s_dv / pairs) * (s_sy / pairs);
}

FeatureClass classify_feature(const FeatureAssignment& feat, const std::vector<int>& labels) {
    require(!feat.values.empty() && feat.values.size() == labels.size(), "ParamError",
            "feature/labels must be nonempty and equal length");
    validate_assignment(feat, /*require_two_values=*/false);

    // Core: delta agreement with labels holds for every pair.
    double n_cell[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
    for (std::size_t i = 0; i < labels.size(); ++i)
        n_cell[feat.values[i]][pm_bit(labels[i])] += 1.0;
    double mismatch = 0.0;
    for (int va = 0; va < 2; ++va)
        for (int ya = 0; ya < 2; ++ya)
            for (int vb = 0; vb < 2; ++vb)
                for (int yb = 0; yb < 2; ++yb) {
                    if (va == vb && ya == yb) continue; // same cell pairs always agree
                    if ((va == vb) == (ya == yb)) continue;
                    mismatch += n_cell[va][ya] * n_cell[vb][yb];
                }
    if (mismatch == 0.0) return FeatureClass::Core;

    const double tol = 1e-6 * static_cast<double>(labels.size());
    if (std::fabs(pair_covariance(feat, labels)) <= tol) return FeatureClass::Noise;
    return FeatureClass::Other;
}

} // namespace sgl::feature
