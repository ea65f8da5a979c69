#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "lsp/matrix.hpp"

namespace lsp::metrics {

/// Ground truth and predictions for the same instances; both 0/1 matrices of
/// equal shape with at least one row.
class PredictionBatch {
public:
    PredictionBatch(const LabelMatrix& truth, const LabelMatrix& predicted);
    PredictionBatch(LabelMatrix&&, const LabelMatrix&) = delete;
    PredictionBatch(const LabelMatrix&, LabelMatrix&&) = delete;

    const LabelMatrix& truth() const noexcept { return *truth_; }
    const LabelMatrix& predicted() const noexcept { return *predicted_; }
    std::size_t instance_count() const noexcept { return truth_->rows(); }
    std::size_t label_count() const noexcept { return truth_->cols(); }

private:
    const LabelMatrix* truth_;
    const LabelMatrix* predicted_;
};

struct ConfusionCounts {
    std::vector<std::size_t> tp, fp, fn, tn;  // per label
};

ConfusionCounts confusion_counts(const PredictionBatch& batch);

double hamming_loss(const PredictionBatch& batch);
double subset_accuracy(const PredictionBatch& batch);
/// Mean per-instance |t & p| / |t | p|; an instance with both sets empty scores 1.
double jaccard_score(const PredictionBatch& batch);
/// F1 from summed counts; 0 when there are no positives at all.
double f1_micro(const PredictionBatch& batch);
/// Mean per-label F1; a label with no positives in truth or prediction scores 0.
double f1_macro(const PredictionBatch& batch);

enum class Metric { hamming_loss, subset_accuracy, jaccard, f1_micro, f1_macro };

inline constexpr Metric all_metrics[] = {Metric::hamming_loss, Metric::subset_accuracy, Metric::jaccard,
                                         Metric::f1_micro, Metric::f1_macro};

std::string_view metric_name(Metric m) noexcept;
std::optional<Metric> parse_metric(std::string_view name) noexcept;
/// Hamming loss is the only metric where smaller is better.
bool higher_is_better(Metric m) noexcept;

double evaluate(Metric m, const PredictionBatch& batch);

}  // namespace lsp::metrics
