#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>
#include <vector>

#include "hsc/errors.hpp"
#include "hsc/partitions.hpp"

using namespace hsc;

namespace {

// Brute-force partition enumeration by exhaustive block assignment,
// canonicalized to blocks-by-least-element; independent of the RGS generator.
std::set<std::vector<std::vector<int>>> brute_force_partitions(std::size_t m) {
    std::set<std::vector<std::vector<int>>> out;
    std::vector<int> assign(m, 0);
    for (;;) {
        int blocks = *std::max_element(assign.begin(), assign.end()) + 1;
        std::vector<std::vector<int>> p(static_cast<std::size_t>(blocks));
        for (std::size_t i = 0; i < m; ++i)
            p[static_cast<std::size_t>(assign[i])].push_back(static_cast<int>(i));
        bool valid = true;
        for (const auto& b : p)
            if (b.empty()) valid = false;
        if (valid) {
            std::sort(p.begin(), p.end(),
                      [](const auto& a, const auto& b) { return a.front() < b.front(); });
            out.insert(p);
        }
        std::size_t i = m;
        while (i > 0 && assign[i - 1] == static_cast<int>(m) - 1) assign[--i] = 0;
        if (i == 0) break;
        ++assign[i - 1];
    }
    return out;
}

unsigned long long stirling2(std::size_t m, std::size_t k) {
    if (m == 0) return k == 0 ? 1 : 0;
    if (k == 0 || k > m) return 0;
    return k * stirling2(m - 1, k) + stirling2(m - 1, k - 1);
}

LabelSet plain(std::size_t m) {
    LabelSet g;
    for (std::size_t i = 0; i < m; ++i) g.labels.push_back(static_cast<int>(i));
    return g;
}

} // namespace

TEST_CASE("bell numbers match the known table") {
    const unsigned long long known[] = {1, 1, 2, 5, 15, 52, 203, 877, 4140};
    for (std::size_t m = 0; m <= 8; ++m) {
        CHECK(bell_number(m) == known[m]);
        CHECK(index_partitions(m).size() == known[m]);
    }
}

TEST_CASE("RGS enumeration matches brute-force assignment enumeration") {
    for (std::size_t m = 1; m <= 6; ++m) {
        auto brute = brute_force_partitions(m);
        std::set<std::vector<std::vector<int>>> rgs;
        for (const auto& p : index_partitions(m)) rgs.insert(p);
        CHECK(rgs == brute);
    }
}

TEST_CASE("enumeration order is deterministic and blocks are canonical") {
    const auto& a = index_partitions(5);
    const auto& b = index_partitions(5);
    CHECK(&a == &b);  // cached
    for (const auto& p : a) {
        for (std::size_t i = 1; i < p.size(); ++i)
            CHECK(p[i - 1].front() < p[i].front());
        for (const auto& blk : p)
            CHECK(std::is_sorted(blk.begin(), blk.end()));
    }
}

TEST_CASE("cumulant coefficients") {
    CHECK(cumulant_coefficient(1) == 1);
    CHECK(cumulant_coefficient(2) == -1);
    CHECK(cumulant_coefficient(3) == 2);
    CHECK(cumulant_coefficient(4) == -6);
    CHECK(cumulant_coefficient(5) == 24);
}

TEST_CASE("partition-lattice Moebius identity") {
    for (std::size_t m = 1; m <= 8; ++m) {
        long long sum = 0;
        for (const auto& p : index_partitions(m))
            sum += cumulant_coefficient(static_cast<int>(p.size()));
        CHECK(sum == (m == 1 ? 1 : 0));
    }
}

TEST_CASE("label-set partitions respect labels and fused prefixes") {
    LabelSet g;
    g.labels = {7, 3, 9};
    auto parts = enumerate_partitions(g);
    CHECK(parts.size() == 5);
    for (const auto& p : parts) {
        std::set<int> seen;
        for (const auto& b : p.blocks)
            for (int l : b) seen.insert(l);
        CHECK(seen == std::set<int>{3, 7, 9});
    }

    LabelSet fused;
    fused.labels = {0, 1, 2, 3};
    fused.fused_prefix = 2;
    CHECK(fused.element_count() == 3);
    auto fp = enumerate_partitions(fused);
    CHECK(fp.size() == bell_number(3));
    for (const auto& p : fp) {
        // The fused pair {0,1} must always share a block.
        bool together = false;
        for (const auto& b : p.blocks) {
            bool has0 = std::count(b.begin(), b.end(), 0) > 0;
            bool has1 = std::count(b.begin(), b.end(), 1) > 0;
            if (has0 != has1) FAIL("fused labels split across blocks");
            if (has0 && has1) together = true;
        }
        CHECK(together);
    }
}

TEST_CASE("bipartitions count 2^(m-1) - 1") {
    for (std::size_t m = 2; m <= 6; ++m) {
        auto bp = enumerate_bipartitions(plain(m));
        CHECK(bp.size() == (1ull << (m - 1)) - 1);
        for (const auto& p : bp) CHECK(p.size() == 2);
    }
}

TEST_CASE("dissections count partial Bell sums") {
    for (std::size_t m = 1; m <= 6; ++m) {
        for (std::size_t cap = 1; cap <= m; ++cap) {
            unsigned long long expect = 0;
            for (std::size_t k = 1; k <= cap; ++k) expect += stirling2(m, k);
            auto ds = enumerate_dissections(plain(m), cap);
            CHECK(ds.size() == expect);
            for (const auto& d : ds) {
                CHECK(d.size() <= cap);
                for (const auto& part : d.parts)
                    CHECK(std::is_sorted(part.begin(), part.end()));
            }
        }
    }
}

TEST_CASE("ground cap is enforced") {
    CHECK_THROWS_AS(index_partitions(kPartitionGroundCap + 1), CapacityError);
    LabelSet big = plain(kPartitionGroundCap + 1);
    CHECK_THROWS_AS(enumerate_partitions(big), CapacityError);
}
