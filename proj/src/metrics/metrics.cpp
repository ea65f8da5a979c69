#include "lsp/metrics.hpp"

#include "lsp/error.hpp"
#include "lsp/simd.hpp"

namespace lsp::metrics {

PredictionBatch::PredictionBatch(const LabelMatrix& truth, const LabelMatrix& predicted)
    : truth_(&truth), predicted_(&predicted) {
    if (truth.rows() != predicted.rows() || truth.cols() != predicted.cols())
        throw InvalidArgument("truth and prediction shapes differ");
    if (truth.rows() == 0) throw InvalidArgument("empty prediction batch");
    if (truth.cols() == 0) throw InvalidArgument("prediction batch has no labels");
    for (auto* m : {&truth, &predicted})
        for (auto v : m->values())
            if (v > 1) throw InvalidArgument("label matrices must hold 0/1 entries");
}

ConfusionCounts confusion_counts(const PredictionBatch& batch) {
    const std::size_t L = batch.label_count();
    ConfusionCounts c{std::vector<std::size_t>(L), std::vector<std::size_t>(L), std::vector<std::size_t>(L),
                      std::vector<std::size_t>(L)};
    for (std::size_t r = 0; r < batch.instance_count(); ++r) {
        for (std::size_t j = 0; j < L; ++j) {
            const bool t = batch.truth()(r, j), p = batch.predicted()(r, j);
            if (t && p) ++c.tp[j];
            else if (p) ++c.fp[j];
            else if (t) ++c.fn[j];
            else ++c.tn[j];
        }
    }
    return c;
}

double hamming_loss(const PredictionBatch& batch) {
    const double labels = static_cast<double>(batch.label_count());
    double sum = 0.0;
    for (std::size_t r = 0; r < batch.instance_count(); ++r) {
        const auto o = simd::overlap(batch.truth().row(r), batch.predicted().row(r));
        sum += static_cast<double>(o.only_a + o.only_b) / labels;
    }
    return sum / static_cast<double>(batch.instance_count());
}

double subset_accuracy(const PredictionBatch& batch) {
    std::size_t exact = 0;
    for (std::size_t r = 0; r < batch.instance_count(); ++r) {
        const auto o = simd::overlap(batch.truth().row(r), batch.predicted().row(r));
        exact += (o.only_a + o.only_b == 0);
    }
    return static_cast<double>(exact) / static_cast<double>(batch.instance_count());
}

double jaccard_score(const PredictionBatch& batch) {
    double sum = 0.0;
    for (std::size_t r = 0; r < batch.instance_count(); ++r) {
        const auto o = simd::overlap(batch.truth().row(r), batch.predicted().row(r));
        sum += o.either == 0 ? 1.0 : static_cast<double>(o.both) / static_cast<double>(o.either);
    }
    return sum / static_cast<double>(batch.instance_count());
}

namespace {

double f1(std::size_t tp, std::size_t fp, std::size_t fn) {
    const double precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
    const double recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
    return precision + recall == 0.0 ? 0.0 : 2.0 * precision * recall / (precision + recall);
}

}  // namespace

double f1_micro(const PredictionBatch& batch) {
    const auto c = confusion_counts(batch);
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t j = 0; j < batch.label_count(); ++j) {
        tp += c.tp[j];
        fp += c.fp[j];
        fn += c.fn[j];
    }
    return f1(tp, fp, fn);
}

double f1_macro(const PredictionBatch& batch) {
    const auto c = confusion_counts(batch);
    double sum = 0.0;
    for (std::size_t j = 0; j < batch.label_count(); ++j) sum += f1(c.tp[j], c.fp[j], c.fn[j]);
    return sum / static_cast<double>(batch.label_count());
}

std::string_view metric_name(Metric m) noexcept {
    switch (m) {
        case Metric::hamming_loss: return "hamming_loss";
        case Metric::subset_accuracy: return "subset_accuracy";
        case Metric::jaccard: return "jaccard";
        case Metric::f1_micro: return "f1_micro";
        case Metric::f1_macro: return "f1_macro";
    }
    return "unknown";
}

std::optional<Metric> parse_metric(std::string_view name) noexcept {
    for (auto m : all_metrics)
        if (metric_name(m) == name) return m;
    return std::nullopt;
}

bool higher_is_better(Metric m) noexcept { return m != Metric::hamming_loss; }

double evaluate(Metric m, const PredictionBatch& batch) {
    switch (m) {
        case Metric::hamming_loss: return hamming_loss(batch);
        case Metric::subset_accuracy: return subset_accuracy(batch);
        case Metric::jaccard: return jaccard_score(batch);
        case Metric::f1_micro: return f1_micro(batch);
        case Metric::f1_macro: return f1_macro(batch);
    }
    throw InvalidArgument("unknown metric");
}

}  // namespace lsp::metrics
