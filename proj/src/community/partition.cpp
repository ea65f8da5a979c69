#include "lsp/partition.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <ostream>
#include <string>

#include "lsp/error.hpp"

namespace lsp {

Partition::Partition(std::vector<Block> blocks, std::size_t element_count)
    : blocks_(std::move(blocks)), element_count_(element_count) {
    std::vector<bool> seen(element_count_, false);
    std::size_t covered = 0;
    for (auto& b : blocks_) {
        if (b.empty()) throw InvalidArgument("partition contains an empty block");
        std::sort(b.begin(), b.end());
        for (auto v : b) {
            if (v >= element_count_) throw InvalidArgument("partition element out of range");
            if (seen[v]) throw InvalidArgument("element " + std::to_string(v) + " appears in two blocks");
            seen[v] = true;
            ++covered;
        }
    }
    if (covered != element_count_) throw InvalidArgument("partition does not cover every element");
    std::sort(blocks_.begin(), blocks_.end(), [](const Block& a, const Block& b) { return a.front() < b.front(); });
}

Partition Partition::singletons(std::size_t n) {
    std::vector<Block> blocks;
    for (std::uint32_t v = 0; v < n; ++v) blocks.push_back({v});
    return Partition(std::move(blocks), n);
}

Partition Partition::single_block(std::size_t n) {
    Block b(n);
    for (std::uint32_t v = 0; v < n; ++v) b[v] = v;
    return n ? Partition({std::move(b)}, n) : Partition({}, 0);
}

Partition Partition::from_membership(std::span<const std::uint32_t> membership) {
    std::map<std::uint32_t, Block> groups;
    for (std::uint32_t v = 0; v < membership.size(); ++v) groups[membership[v]].push_back(v);
    std::vector<Block> blocks;
    for (auto& [id, b] : groups) blocks.push_back(std::move(b));
    return Partition(std::move(blocks), membership.size());
}

std::vector<std::uint32_t> Partition::membership() const {
    std::vector<std::uint32_t> m(element_count_);
    for (std::uint32_t b = 0; b < blocks_.size(); ++b)
        for (auto v : blocks_[b]) m[v] = b;
    return m;
}

void Partition::write(std::ostream& out) const {
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        out << b << ':';
        for (std::size_t i = 0; i < blocks_[b].size(); ++i) out << (i ? "," : " ") << blocks_[b][i];
        out << '\n';
    }
}

Partition Partition::parse(std::string_view text) {
    std::vector<Block> blocks;
    std::size_t line_no = 0;
    std::uint32_t max_seen = 0;
    bool any = false;
    while (!text.empty()) {
        const auto eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
        if (line.empty()) continue;
        const auto colon = line.find(':');
        if (colon == std::string_view::npos) throw ParseError("expected 'index: members'", line_no);
        std::string_view members = line.substr(colon + 1);
        Block block;
        while (!members.empty()) {
            while (!members.empty() && (members.front() == ' ' || members.front() == ',')) members.remove_prefix(1);
            if (members.empty()) break;
            std::uint32_t v = 0;
            const auto res = std::from_chars(members.data(), members.data() + members.size(), v);
            if (res.ec != std::errc{}) throw ParseError("malformed member list", line_no);
            members.remove_prefix(static_cast<std::size_t>(res.ptr - members.data()));
            block.push_back(v);
            max_seen = std::max(max_seen, v);
            any = true;
        }
        blocks.push_back(std::move(block));
    }
    return Partition(std::move(blocks), any ? max_seen + 1u : 0u);
}

}  // namespace lsp
