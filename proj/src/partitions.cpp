#include "hsc/partitions.hpp"

#include <array>
#include <mutex>

#include "hsc/errors.hpp"

namespace hsc {

namespace {

std::vector<IndexPartition> build_index_partitions(std::size_t m) {
    std::vector<IndexPartition> out;
    if (m == 0) {
        out.push_back({});
        return out;
    }
    // Restricted-growth strings: a[0] = 0, a[i] <= max(a[0..i-1]) + 1.
    std::vector<int> a(m, 0);
    for (;;) {
        int nblocks = 0;
        for (std::size_t i = 0; i < m; ++i) nblocks = std::max(nblocks, a[i] + 1);
        IndexPartition p(nblocks);
        for (std::size_t i = 0; i < m; ++i) p[a[i]].push_back(static_cast<int>(i));
        out.push_back(std::move(p));

        // advance
        std::size_t i = m;
        while (i-- > 1) {
            int mx = 0;
            for (std::size_t j = 0; j < i; ++j) mx = std::max(mx, a[j]);
            if (a[i] <= mx) {
                ++a[i];
                for (std::size_t j = i + 1; j < m; ++j) a[j] = 0;
                break;
            }
            if (i == 1) return out;
        }
        if (m == 1) return out;
    }
}

void check_ground(const LabelSet& ground) {
    if (ground.fused_prefix > ground.labels.size())
        throw DomainError("fused prefix exceeds label count");
    for (std::size_t i = 0; i < ground.labels.size(); ++i)
        for (std::size_t j = i + 1; j < ground.labels.size(); ++j)
            if (ground.labels[i] == ground.labels[j])
                throw DomainError("label set has duplicate labels");
}

// Labels belonging to partition element e (the fused prefix is element 0).
std::vector<int> element_labels(const LabelSet& ground, int e) {
    std::vector<int> out;
    if (ground.fused_prefix == 0) {
        out.push_back(ground.labels[static_cast<std::size_t>(e)]);
    } else if (e == 0) {
        out.assign(ground.labels.begin(),
                   ground.labels.begin() + static_cast<std::ptrdiff_t>(ground.fused_prefix));
    } else {
        out.push_back(ground.labels[ground.fused_prefix + static_cast<std::size_t>(e) - 1]);
    }
    return out;
}

SetPartition to_label_partition(const LabelSet& ground, const IndexPartition& p) {
    SetPartition sp;
    sp.blocks.reserve(p.size());
    for (const auto& block : p) {
        std::vector<int> labels;
        for (int e : block) {
            auto el = element_labels(ground, e);
            labels.insert(labels.end(), el.begin(), el.end());
        }
        sp.blocks.push_back(std::move(labels));
    }
    return sp;
}

} // namespace

const std::vector<IndexPartition>& index_partitions(std::size_t m) {
    if (m > kPartitionGroundCap)
        throw CapacityError("partition ground set larger than cap " +
                            std::to_string(kPartitionGroundCap));
    static std::array<std::vector<IndexPartition>, kPartitionGroundCap + 1> cache;
    static std::array<std::once_flag, kPartitionGroundCap + 1> flags;
    std::call_once(flags[m], [m] { cache[m] = build_index_partitions(m); });
    return cache[m];
}

unsigned long long bell_number(std::size_t m) {
    // Bell triangle.
    std::vector<unsigned long long> row{1};
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<unsigned long long> next;
        next.reserve(row.size() + 1);
        next.push_back(row.back());
        for (unsigned long long v : row) next.push_back(next.back() + v);
        row = std::move(next);
    }
    return row.front();
}

long long cumulant_coefficient(int block_count) {
    if (block_count < 1) throw DomainError("block count must be positive");
    long long v = 1;
    for (int k = 2; k < block_count; ++k) v *= k;
    return (block_count % 2 == 1) ? v : -v;
}

std::vector<SetPartition> enumerate_partitions(const LabelSet& ground) {
    check_ground(ground);
    std::size_t m = ground.element_count();
    if (m < 1) throw DomainError("partition ground set must be nonempty");
    if (m > kPartitionGroundCap)
        throw CapacityError("partition ground set larger than cap " +
                            std::to_string(kPartitionGroundCap));
    std::vector<SetPartition> out;
    for (const auto& p : index_partitions(m)) out.push_back(to_label_partition(ground, p));
    return out;
}

std::vector<SetPartition> enumerate_bipartitions(const LabelSet& ground) {
    check_ground(ground);
    std::size_t m = ground.element_count();
    if (m < 2) throw DomainError("bipartition needs at least two elements");
    if (m > kPartitionGroundCap)
        throw CapacityError("partition ground set larger than cap " +
                            std::to_string(kPartitionGroundCap));
    std::vector<SetPartition> out;
    // Unordered 2-block partitions: element 0 stays in the first block.
    std::size_t masks = std::size_t{1} << (m - 1);
    for (std::size_t mask = 1; mask < masks; ++mask) {
        IndexPartition p(2);
        p[0].push_back(0);
        for (std::size_t e = 1; e < m; ++e)
            p[(mask >> (e - 1)) & 1 ? 1 : 0].push_back(static_cast<int>(e));
        out.push_back(to_label_partition(ground, p));
    }
    return out;
}

std::vector<Dissection> enumerate_dissections(const LabelSet& ground,
                                              std::size_t max_parts) {
    check_ground(ground);
    if (ground.fused_prefix != 0)
        throw DomainError("dissections are defined on plain ordered label sets");
    if (max_parts < 1) throw DomainError("max_parts must be at least 1");
    std::size_t m = ground.labels.size();
    if (m == 0) return {Dissection{}};
    if (m > kPartitionGroundCap)
        throw CapacityError("dissection ground set larger than cap " +
                            std::to_string(kPartitionGroundCap));
    std::vector<Dissection> out;
    for (const auto& p : index_partitions(m)) {
        if (p.size() > max_parts) continue;
        Dissection d;
        d.parts.reserve(p.size());
        for (const auto& block : p) {
            std::vector<int> labels;
            labels.reserve(block.size());
            // Block members are stored in increasing index order, so each
            // part inherits the ground set's linear order.
            for (int e : block) labels.push_back(ground.labels[static_cast<std::size_t>(e)]);
            d.parts.push_back(std::move(labels));
        }
        out.push_back(std::move(d));
    }
    return out;
}

} // namespace hsc
