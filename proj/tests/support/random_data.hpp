#pragma once

#include <random>
#include <string>
#include <vector>

#include "lsp/dataset.hpp"

namespace testdata {

/// Small dataset with integer-valued features and correlated labels.
inline lsp::Dataset random_dataset(std::mt19937_64& rng, std::size_t rows, std::size_t features, std::size_t labels) {
    lsp::FeatureMatrix x(rows, features);
    lsp::LabelMatrix y(rows, labels);
    std::uniform_int_distribution<int> value(0, 9);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t f = 0; f < features; ++f) x(r, f) = value(rng);
        for (std::size_t l = 0; l < labels; ++l)
            y(r, l) = static_cast<std::uint8_t>((x(r, l % features) + static_cast<double>(rng() % 4)) > 6.0);
    }
    std::vector<std::string> names;
    std::vector<lsp::AttributeMeta> meta;
    for (std::size_t l = 0; l < labels; ++l) names.push_back("l" + std::to_string(l));
    for (std::size_t f = 0; f < features; ++f) meta.push_back({"f" + std::to_string(f), lsp::AttributeMeta::Kind::numeric, {}});
    return lsp::Dataset(std::move(x), std::move(y), std::move(names), std::move(meta));
}

}  // namespace testdata
