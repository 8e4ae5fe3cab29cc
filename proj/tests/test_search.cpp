#include "asbpir/search.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <vector>

using namespace asbpir;

namespace {

std::map<Vec, int> column_value_counts(const CandidateEnumerator& en,
                                       const std::vector<int>& tuple) {
    std::map<Vec, int> counts;
    for (int i = 0; i < en.k(); ++i) {
        Vec e(en.k(), 0);
        e[i] = 1;
        ++counts[e];
    }
    for (int idx : tuple) ++counts[en.points()[idx]];
    return counts;
}

// Smallest n at which any rank-k matrix (no canonicalization at all) has the
// property, scanning column odometers up to n_max.
int brute_force_min_length(int k, int t, int q, PropertyKind kind, int n_max) {
    const Field& f = field_for_order(q);
    uint64_t qk = 1;
    for (int i = 0; i < k; ++i) qk *= q;
    for (int n = k; n <= n_max; ++n) {
        std::vector<uint64_t> cols(n, 0);
        while (true) {
            Matrix m(f, k, n);
            for (int j = 0; j < n; ++j) {
                Vec col = detail::decode_vec(cols[j], q, k);
                for (int i = 0; i < k; ++i) m.set(i, j, col[i]);
            }
            if (rank_of(m) == k && check(GeneratorMatrix(std::move(m)), kind, t).holds) return n;
            int j = 0;
            while (j < n && ++cols[j] == qk) cols[j++] = 0;
            if (j == n) break;
        }
    }
    return -1;
}

bool outcomes_equal(const SearchOutcome& a, const SearchOutcome& b) {
    if (a.k != b.k || a.t != b.t || a.q != b.q || a.kind != b.kind) return false;
    if (a.found != b.found || a.n != b.n || a.witness_source != b.witness_source) return false;
    if (a.candidates_examined != b.candidates_examined) return false;
    if (a.certified_floor != b.certified_floor || a.budget_exceeded != b.budget_exceeded)
        return false;
    if (a.strategy_version != b.strategy_version || a.wall_ms != b.wall_ms) return false;
    if (a.witness.has_value() != b.witness.has_value()) return false;
    if (a.witness && (a.witness->entries != b.witness->entries || a.witness->p != b.witness->p ||
                      a.witness->e != b.witness->e || a.witness->k != b.witness->k ||
                      a.witness->n != b.witness->n || a.witness->name != b.witness->name))
        return false;
    if (a.lengths.size() != b.lengths.size()) return false;
    for (size_t i = 0; i < a.lengths.size(); ++i) {
        const LengthStats &x = a.lengths[i], &y = b.lengths[i];
        if (x.n != y.n || x.enumerated != y.enumerated || x.examined != y.examined ||
            x.shard_counts != y.shard_counts || x.exhausted != y.exhausted ||
            x.witness_found != y.witness_found || x.witness_source != y.witness_source)
            return false;
    }
    return true;
}

}  // namespace

TEST_CASE("projective points and candidate counts") {
    const Field& f2 = Field::get(2, 1);
    const Field& f3 = Field::get(3, 1);

    CHECK(projective_points(f2, 3) ==
          std::vector<Vec>{{1, 0, 0},
                           {0, 1, 0},
                           {1, 1, 0},
                           {0, 0, 1},
                           {1, 0, 1},
                           {0, 1, 1},
                           {1, 1, 1}});
    CHECK(projective_points(f3, 2) == std::vector<Vec>{{1, 0}, {0, 1}, {1, 1}, {1, 2}});
    CHECK(projective_points(Field::get(2, 2), 2).size() == 5);
    CHECK(projective_points(Field::get(5, 1), 3).size() == 31);
    CHECK_THROWS_AS(projective_points(f2, 25), std::length_error);

    CHECK(canonical_candidate_count(2, 2, 2) == 1);
    CHECK(canonical_candidate_count(2, 3, 2) == 3);
    CHECK(canonical_candidate_count(3, 7, 2) == 210);
    CHECK(canonical_candidate_count(1, 5, 7) == 1);
    CHECK(canonical_candidate_count(6, 11, 2) == 9'657'648);
    CHECK_THROWS_AS(canonical_candidate_count(3, 2, 2), std::invalid_argument);
    CHECK_THROWS_AS(canonical_candidate_count(4, 40, 5), std::overflow_error);
}

TEST_CASE("candidate enumerator streams shards in global order") {
    const Field& f2 = Field::get(2, 1);
    CandidateEnumerator en(f2, 2, 4);
    CHECK(en.size() == 6);
    CHECK(en.num_shards() == 3);
    CHECK(en.points().size() == 3);
    CHECK(en.encodings() == std::vector<uint64_t>{1, 2, 3});

    std::vector<std::pair<uint64_t, std::vector<int>>> seen;
    for (int s = 0; s < en.num_shards(); ++s) {
        CHECK(en.shard_size(s) == static_cast<uint64_t>(3 - s));
        en.for_each_in_shard(s, [&](uint64_t index, const std::vector<int>& tuple) {
            seen.emplace_back(index, tuple);
            return true;
        });
    }
    const std::vector<std::pair<uint64_t, std::vector<int>>> expect = {
        {0, {0, 0}}, {1, {0, 1}}, {2, {0, 2}}, {3, {1, 1}}, {4, {1, 2}}, {5, {2, 2}}};
    CHECK(seen == expect);

    const Matrix m = en.materialize({0, 2});
    CHECK(m == Matrix::from_rows(f2, {{1, 0, 1, 1}, {0, 1, 0, 1}}));

    int visits = 0;
    en.for_each_in_shard(0, [&](uint64_t, const std::vector<int>&) {
        ++visits;
        return false;
    });
    CHECK(visits == 1);

    CandidateEnumerator square(f2, 3, 3);
    CHECK(square.size() == 1);
    CHECK(square.num_shards() == 1);
    square.for_each_in_shard(0, [&](uint64_t index, const std::vector<int>& tuple) {
        CHECK(index == 0);
        CHECK(tuple.empty());
        CHECK(square.materialize(tuple) == Matrix::identity(f2, 3));
        return true;
    });

    CandidateEnumerator wide(f2, 3, 7);
    CHECK(wide.size() == canonical_candidate_count(3, 7, 2));
    CHECK(wide.shard_size(0) == 84);
    uint64_t total = 0;
    for (int s = 0; s < wide.num_shards(); ++s) total += wide.shard_size(s);
    CHECK(total == wide.size());

    CHECK_THROWS_AS(CandidateEnumerator(f2, 3, 2), std::invalid_argument);
}

TEST_CASE("fast checker agrees with the generic property check") {
    struct Case {
        int k, n, q, t;
    };
    for (const Case c : {Case{2, 4, 2, 2}, Case{2, 5, 3, 2}, Case{3, 5, 2, 2}, Case{3, 5, 2, 3},
                         Case{2, 6, 4, 2}}) {
        const Field& f = field_for_order(c.q);
        CandidateEnumerator en(f, c.k, c.n);
        FastAspirChecker checker(en, c.t);
        for (int s = 0; s < en.num_shards(); ++s) {
            en.for_each_in_shard(s, [&](uint64_t, const std::vector<int>& tuple) {
                const bool fast = checker.passes_counts(tuple) && checker.aspir(tuple);
                const bool slow =
                    check(GeneratorMatrix(en.materialize(tuple)), PropertyKind::aspir, c.t).holds;
                int max_count = 0;
                for (const auto& [v, cnt] : column_value_counts(en, tuple))
                    max_count = std::max(max_count, cnt);
                if (fast) REQUIRE(slow);
                if (max_count <= c.t) REQUIRE(fast == slow);
                return true;
            });
        }
    }

    const Field& f2 = Field::get(2, 1);
    CandidateEnumerator many_free(f2, 2, 28);
    CHECK_THROWS_AS(FastAspirChecker(many_free, 2), std::invalid_argument);
    CandidateEnumerator big_space(Field::get(3, 1), 2, 17);
    CHECK_THROWS_AS(FastAspirChecker(big_space, 2), std::length_error);
}

TEST_CASE("minimal length search on pinned cases") {
    SearchOutcome o = find_min_length(3, 3, 2, PropertyKind::asbatch);
    CHECK(o.found);
    CHECK(o.n == 6);
    CHECK(o.witness_source == "t3");
    CHECK(o.certified_floor == 6);
    CHECK(o.candidates_examined == 28);
    CHECK_FALSE(o.budget_exceeded);
    REQUIRE(o.lengths.size() == 2);
    CHECK(o.lengths[0].n == 5);
    CHECK(o.lengths[0].enumerated == 28);
    CHECK(o.lengths[0].examined == 28);
    CHECK(o.lengths[0].exhausted);
    CHECK(o.lengths[0].shard_counts == std::vector<uint64_t>{7, 6, 5, 4, 3, 2, 1});
    CHECK(o.lengths[1].n == 6);
    CHECK(o.lengths[1].witness_found);
    CHECK(o.lengths[1].examined == 0);
    REQUIRE(o.witness.has_value());
    CHECK(check(to_generator(*o.witness), PropertyKind::asbatch, 3).holds);

    // same outcome when the shard scan is spread over threads
    {
        SearchOptions opts;
        opts.threads = 4;
        SearchOutcome threaded = find_min_length(3, 3, 2, PropertyKind::asbatch, opts);
        threaded.wall_ms = o.wall_ms;
        CHECK(outcomes_equal(o, threaded));
    }

    o = find_min_length(2, 4, 2, PropertyKind::asbatch);
    CHECK(o.n == 6);
    CHECK(o.witness_source == "t4_gprime");
    CHECK(o.candidates_examined == 0);
    CHECK(o.lengths.size() == 1);

    o = find_min_length(4, 3, 2, PropertyKind::asbatch);
    CHECK(o.n == 8);
    CHECK(o.witness_source == "t3");
    CHECK(o.candidates_examined == 120 + 680);
    REQUIRE(o.lengths.size() == 3);
    CHECK(o.lengths[0].examined == 120);
    CHECK(o.lengths[1].examined == 680);

    o = find_min_length(1, 4, 2, PropertyKind::asbatch);
    CHECK(o.n == 4);
    o = find_min_length(3, 2, 3, PropertyKind::aspir);
    CHECK(o.n == 4);
    CHECK(o.witness_source == "identity_parity");

    CHECK_THROWS_AS(find_min_length(0, 2, 2, PropertyKind::aspir), std::invalid_argument);
    CHECK_THROWS_AS(find_min_length(2, 0, 2, PropertyKind::aspir), std::invalid_argument);

    SearchOptions capped;
    capped.n_end = 5;
    o = find_min_length(3, 3, 2, PropertyKind::asbatch, capped);
    CHECK_FALSE(o.found);
    CHECK(o.certified_floor == 6);
    CHECK(o.lengths.size() == 1);
    CHECK_FALSE(o.budget_exceeded);

    SearchOptions tight;
    tight.budget = 100;
    o = find_min_length(4, 3, 2, PropertyKind::asbatch, tight);
    CHECK_FALSE(o.found);
    CHECK(o.budget_exceeded);
    CHECK(o.certified_floor == 6);
    REQUIRE(o.lengths.size() == 1);
    CHECK(o.lengths[0].enumerated == 120);
    CHECK(o.lengths[0].examined == 0);

    tight.budget = 130;
    o = find_min_length(4, 3, 2, PropertyKind::asbatch, tight);
    CHECK(o.budget_exceeded);
    CHECK(o.certified_floor == 7);
    CHECK(o.candidates_examined == 120);
    CHECK(o.lengths.size() == 2);

    // jumping in above the proven floor leaves the skipped lengths
    // unsettled, so the floor must not advance past them
    SearchOptions jump;
    jump.n_start = 6;
    o = find_min_length(3, 3, 2, PropertyKind::asbatch, jump);
    CHECK(o.found);
    CHECK(o.n == 6);
    CHECK(o.certified_floor == 5);
}

TEST_CASE("search minima match the exact bound values on a small grid") {
    std::map<std::tuple<int, int, int>, int> computed;
    for (int q : {2, 3})
        for (int k = 1; k <= 5; ++k)
            for (int t = 1; t <= 4; ++t) {
                const BoundReport rep = length_bounds(k, t, q);
                long long exact = -1;
                for (const auto& e : rep.entries)
                    if (e.kind == BoundKind::exact) exact = e.value;
                if (exact < 0) continue;
                const SearchOutcome o = find_min_length(k, t, q, PropertyKind::asbatch);
                INFO("k=" << k << " t=" << t << " q=" << q);
                REQUIRE(o.found);
                CHECK(o.n == exact);
                for (const auto& e : rep.entries) {
                    if (e.kind == BoundKind::lower) CHECK(e.value <= o.n);
                    if (e.kind == BoundKind::upper) CHECK(o.n <= e.value);
                }
                REQUIRE(o.witness.has_value());
                CHECK(check(to_generator(*o.witness), PropertyKind::asbatch, t).holds);
                computed[{k, t, q}] = o.n;
            }

    for (const auto& [key, n] : computed) {
        const auto [k, t, q] = key;
        INFO("k=" << k << " t=" << t << " q=" << q);
        auto prev = computed.find({k, t - 1, q});
        if (prev != computed.end()) CHECK(prev->second <= n - 1);
        for (int t1 = 1; t1 < t; ++t1) {
            auto a = computed.find({k, t1, q});
            auto b = computed.find({k, t - t1, q});
            if (a != computed.end() && b != computed.end())
                CHECK(n <= a->second + b->second);
        }
    }
}

TEST_CASE("canonical search agrees with a no-symmetry brute force") {
    struct Case {
        int k, t;
        PropertyKind kind;
    };
    const Case cases[] = {
        {2, 1, PropertyKind::aspir},   {2, 2, PropertyKind::aspir},
        {2, 3, PropertyKind::aspir},   {3, 2, PropertyKind::aspir},
        {2, 2, PropertyKind::asbatch}, {2, 3, PropertyKind::asbatch},
        {3, 1, PropertyKind::asbatch}, {3, 2, PropertyKind::asbatch},
    };
    for (const Case c : cases) {
        const int brute = brute_force_min_length(c.k, c.t, 2, c.kind, 5);
        REQUIRE(brute > 0);
        const SearchOutcome o = find_min_length(c.k, c.t, 2, c.kind);
        INFO("k=" << c.k << " t=" << c.t << " kind=" << to_string(c.kind));
        CHECK(o.n == brute);
    }
}

TEST_CASE("two-sided verification certificates") {
    VerifyCertificate cert = verify_value(3, 3, 2, PropertyKind::asbatch, 6);
    CHECK(cert.confirmed);
    CHECK(cert.witness_found);
    CHECK(cert.witness_source == "t3");
    CHECK(cert.lower_side == "exhausted");
    CHECK(cert.lower_bound_used == 5);
    CHECK(cert.lower_enumerated == 28);
    CHECK(cert.lower_examined == 28);
    CHECK(cert.lower_shard_counts == std::vector<uint64_t>{7, 6, 5, 4, 3, 2, 1});
    CHECK_FALSE(cert.refutation.has_value());
    REQUIRE(cert.witness.has_value());
    CHECK(check(to_generator(*cert.witness), PropertyKind::asbatch, 3).holds);

    cert = verify_value(2, 4, 2, PropertyKind::asbatch, 6);
    CHECK(cert.confirmed);
    CHECK(cert.witness_source == "t4_gprime");
    CHECK(cert.lower_side == "bound_certified");
    CHECK(cert.lower_bound_used == 6);
    CHECK(cert.lower_enumerated == 0);

    cert = verify_value(3, 1, 2, PropertyKind::asbatch, 3);
    CHECK(cert.confirmed);
    CHECK(cert.witness_source == "identity");
    CHECK(cert.lower_side == "bound_certified");

    cert = verify_value(2, 2, 2, PropertyKind::aspir, 4);
    CHECK_FALSE(cert.confirmed);
    CHECK(cert.witness_found);
    CHECK(cert.witness_source == "sweep");
    REQUIRE(cert.witness.has_value());
    CHECK(cert.witness->entries == std::vector<int>{1, 0, 1, 0, 0, 1, 0, 1});
    CHECK(cert.lower_side == "refuted");
    REQUIRE(cert.refutation.has_value());
    CHECK(cert.refutation->entries == std::vector<int>{1, 0, 1, 0, 1, 1});
    const nlohmann::json cj = certificate_to_json(cert);
    CHECK(cj.at("confirmed") == false);
    CHECK(cj.at("lower_side") == "refuted");
    CHECK_FALSE(cj.at("refutation").is_null());

    cert = verify_value(2, 2, 2, PropertyKind::aspir, 8);
    CHECK_FALSE(cert.confirmed);
    CHECK_FALSE(cert.witness_found);
    CHECK(cert.lower_side == "no_witness");
    CHECK_FALSE(cert.witness.has_value());
    CHECK(certificate_to_json(cert).at("witness").is_null());
}

TEST_CASE("outcomes round trip through json and the cache") {
    const SearchOutcome o = find_min_length(3, 3, 2, PropertyKind::asbatch);
    const SearchOutcome back = outcome_from_json(outcome_to_json(o));
    CHECK(outcomes_equal(o, back));
    CHECK(back.strategy_version == kSearchStrategyVersion);

    const auto dir = std::filesystem::temp_directory_path();
    const std::string path = (dir / "asbpir_search_cache_test.jsonl").string();
    std::filesystem::remove(path);

    // a partial record resumes the scan above its certified floor
    SearchOutcome partial;
    partial.k = 4;
    partial.t = 3;
    partial.q = 2;
    partial.kind = PropertyKind::asbatch;
    partial.certified_floor = 8;
    {
        std::ofstream out(path, std::ios::app);
        out << "{\"k\": 4, \"t\"\n";  // torn write
        out << outcome_to_json(partial).dump() << "\n";
        out << "not json at all\n";
    }
    SearchOptions opts;
    opts.cache_path = path;
    SearchOutcome resumed = find_min_length(4, 3, 2, PropertyKind::asbatch, opts);
    CHECK(resumed.found);
    CHECK(resumed.n == 8);
    CHECK(resumed.candidates_examined == 0);
    CHECK(resumed.lengths.size() == 1);

    // the resumed run appended a found record; later lookups return it as-is
    auto cached = cache_lookup_outcome(path, 4, 3, 2, PropertyKind::asbatch);
    REQUIRE(cached.has_value());
    CHECK(outcomes_equal(*cached, resumed));

    // the last matching record wins
    SearchOutcome fake = resumed;
    fake.n = 99;
    fake.witness.reset();
    cache_append_raw(path, outcome_to_json(fake));
    CHECK(find_min_length(4, 3, 2, PropertyKind::asbatch, opts).n == 99);

    // records for another kind or strategy version never match
    CHECK_FALSE(cache_lookup_outcome(path, 4, 3, 2, PropertyKind::aspir).has_value());
    const std::string vpath = (dir / "asbpir_search_cache_stale.jsonl").string();
    std::filesystem::remove(vpath);
    SearchOutcome stale = fake;
    stale.strategy_version = "0";
    cache_append_raw(vpath, outcome_to_json(stale));
    opts.cache_path = vpath;
    SearchOutcome fresh = find_min_length(4, 3, 2, PropertyKind::asbatch, opts);
    CHECK(fresh.n == 8);
    CHECK(fresh.candidates_examined == 800);

    CHECK_FALSE(cache_lookup_outcome((dir / "asbpir_absent.jsonl").string(), 4, 3, 2,
                                     PropertyKind::asbatch)
                    .has_value());

    std::filesystem::remove(path);
    std::filesystem::remove(vpath);
}
