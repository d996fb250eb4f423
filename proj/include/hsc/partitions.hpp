#pragma once

#include <cstddef>
#include <vector>

namespace hsc {

// Ground set for partition enumeration.  Labels are distinct indices; an
// optional fused prefix marks the first `fused_prefix` labels as one element
// {Y}, which participates in partitions as a single item.
struct LabelSet {
    std::vector<int> labels;
    std::size_t fused_prefix{0};

    // Number of partition elements (the fused block counts as one).
    std::size_t element_count() const {
        if (fused_prefix == 0) return labels.size();
        return labels.size() - fused_prefix + 1;
    }
};

// Partition of a label set into disjoint nonempty blocks.  Blocks are stored
// at label level (a fused block stays contiguous inside its block) and are
// canonically ordered by least contained element position.
struct SetPartition {
    std::vector<std::vector<int>> blocks;
    std::size_t size() const { return blocks.size(); }
};

// Division of a linearly ordered set into disjoint nonempty parts, each part
// keeping the ground order; parts are listed by least element.
struct Dissection {
    std::vector<std::vector<int>> parts;
    std::size_t size() const { return parts.size(); }
};

inline constexpr std::size_t kPartitionGroundCap = 12;

using IndexPartition = std::vector<std::vector<int>>;

// All partitions of {0,...,m-1} generated by restricted-growth strings.
// Blocks are ordered by least element; the returned list order is the RGS
// lexicographic order and is stable across runs.  Cached and thread-safe.
const std::vector<IndexPartition>& index_partitions(std::size_t m);

unsigned long long bell_number(std::size_t m);

// (-1)^(k-1) (k-1)!  -- the partition-lattice Moebius coefficient attached to
// a k-block partition in cumulant expansions.
long long cumulant_coefficient(int block_count);

std::vector<SetPartition> enumerate_partitions(const LabelSet& ground);
std::vector<SetPartition> enumerate_bipartitions(const LabelSet& ground);
std::vector<Dissection> enumerate_dissections(const LabelSet& ground,
                                              std::size_t max_parts);

} // namespace hsc
