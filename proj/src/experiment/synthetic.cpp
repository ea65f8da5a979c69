#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include "lsp/dataset.hpp"
#include "lsp/error.hpp"
#include "lsp/experiment.hpp"

namespace lsp::experiment {

DatasetEntry write_synthetic(const SyntheticSpec& spec, const std::filesystem::path& dir) {
    if (spec.labels < 1 || spec.features < 1) throw InvalidArgument("synthetic data needs labels and features");
    if (spec.instances < 2) throw InvalidArgument("synthetic data needs at least two instances");
    if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) throw InvalidArgument("train_fraction outside (0, 1)");

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    // Labels come in groups of three. Each instance is drawn around the
    // centroid of one group; labels of that group fire from a noisy linear
    // score, labels of other groups only rarely.
    const std::size_t groups = (spec.labels + 2) / 3;
    std::vector<std::vector<double>> centroid(groups, std::vector<double>(spec.features));
    for (auto& c : centroid)
        for (auto& v : c) v = 1.5 * normal(rng);
    std::vector<std::vector<double>> weights(spec.labels, std::vector<double>(spec.features));
    for (auto& w : weights)
        for (auto& v : w) v = normal(rng);

    std::uniform_int_distribution<std::size_t> pick_group(0, groups - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    FeatureMatrix x(spec.instances, spec.features);
    LabelMatrix y(spec.instances, spec.labels);
    for (std::size_t i = 0; i < spec.instances; ++i) {
        const std::size_t g = pick_group(rng);
        for (std::size_t f = 0; f < spec.features; ++f)
            x(i, f) = std::round((centroid[g][f] + normal(rng)) * 1e4) / 1e4;
        for (std::size_t j = 0; j < spec.labels; ++j) {
            if (j / 3 != g) {
                y(i, j) = unit(rng) < 0.03;
                continue;
            }
            double s = 0.0;
            for (std::size_t f = 0; f < spec.features; ++f) s += weights[j][f] * (x(i, f) - centroid[g][f]);
            y(i, j) = s + normal(rng) > -0.5;
        }
    }

    std::vector<AttributeMeta> meta;
    for (std::size_t f = 0; f < spec.features; ++f) meta.push_back({"f" + std::to_string(f), AttributeMeta::Kind::numeric, {}});
    std::vector<std::string> names;
    for (std::size_t j = 0; j < spec.labels; ++j) names.push_back("label" + std::to_string(j));

    const auto n_train = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::llround(spec.train_fraction * static_cast<double>(spec.instances))), 1,
        spec.instances - 1);
    auto slice = [&](std::size_t from, std::size_t to) {
        FeatureMatrix fx(0, spec.features);
        LabelMatrix fy(0, spec.labels);
        for (std::size_t i = from; i < to; ++i) {
            fx.append_row(x.row(i));
            fy.append_row(y.row(i));
        }
        return Dataset(std::move(fx), std::move(fy), names, meta);
    };

    std::filesystem::create_directories(dir);
    DatasetEntry entry{spec.name, dir / (spec.name + "-train.arff"), dir / (spec.name + "-test.arff"),
                       dir / (spec.name + ".xml")};
    auto write = [](const std::filesystem::path& p, auto&& body) {
        std::ofstream out(p, std::ios::binary);
        if (!out) throw Error("cannot write '" + p.string() + "'");
        body(out);
        if (!out) throw Error("write to '" + p.string() + "' failed");
    };
    write(entry.train, [&](std::ostream& o) { write_arff(o, slice(0, n_train), spec.name + "-train"); });
    write(entry.test, [&](std::ostream& o) { write_arff(o, slice(n_train, spec.instances), spec.name + "-test"); });
    write(entry.xml, [&](std::ostream& o) { write_label_header(o, names); });
    return entry;
}

}  // namespace lsp::experiment
