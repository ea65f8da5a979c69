#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace lsp {

/// Disjoint cover of {0, ..., n-1}, held in canonical form: members sorted
/// within blocks, blocks ordered by their smallest member.
class Partition {
public:
    using Block = std::vector<std::uint32_t>;

    Partition() = default;
    /// Canonicalizes `blocks`; throws unless they form a disjoint cover of
    /// 0..element_count-1 with no empty block.
    Partition(std::vector<Block> blocks, std::size_t element_count);

    static Partition singletons(std::size_t n);
    static Partition single_block(std::size_t n);
    /// From a membership vector (element -> arbitrary block id).
    static Partition from_membership(std::span<const std::uint32_t> membership);

    const std::vector<Block>& blocks() const noexcept { return blocks_; }
    std::size_t block_count() const noexcept { return blocks_.size(); }
    std::size_t element_count() const noexcept { return element_count_; }

    /// element -> canonical block index
    std::vector<std::uint32_t> membership() const;

    /// `block_index: v1,v2,...` lines.
    void write(std::ostream& out) const;
    static Partition parse(std::string_view text);

    friend bool operator==(const Partition&, const Partition&) = default;
    friend auto operator<=>(const Partition& a, const Partition& b) { return a.blocks_ <=> b.blocks_; }

private:
    std::vector<Block> blocks_;
    std::size_t element_count_ = 0;
};

}  // namespace lsp
