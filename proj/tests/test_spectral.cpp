#include "doctest.h"

#include <cmath>

#include "detwalk/builtins.hpp"
#include "detwalk/spectral.hpp"
#include "random_models.hpp"

using namespace detwalk;

namespace {

Rational R(long p, long q = 1) { return Rational(p, q); }

WalkModel identity_single_cell() {
    RawModel raw;
    raw.cells = uniform_cells(1);
    raw.branches = {{R(1), R(0)}};
    raw.environment = EnvironmentTable{{0}};
    return build_model(raw);
}

// Power iteration of the lazy operator (I + M)/2 restricted to one class,
// in doubles, normalized to mu-mass 1.
std::vector<double> power_density(const WalkModel& m, const TransferMatrix& t, const CommClass& c) {
    const std::size_t n = t.size();
    std::vector<double> w(m.num_cells()), h(n, 0.0), next(n);
    for (CellIndex a = 0; a < m.num_cells(); ++a) w[a] = m.product_cell_measure(a).to_double();
    for (NodeIndex v : c.members) h[v] = 1.0;
    for (int it = 0; it < 20000; ++it) {
        for (NodeIndex to : c.members) {
            double s = h[to];
            for (NodeIndex from : c.members) s += t.entry(to, from).to_double() * h[from];
            next[to] = s / 2.0;
        }
        h.swap(next);
    }
    double mass = 0.0;
    for (NodeIndex v : c.members) mass += h[v] * w[v / m.num_states()];
    for (auto& x : h) x /= mass;
    return h;
}

Rational mu_integral(const WalkModel& m, const std::vector<Rational>& g) {
    Rational total(0);
    for (NodeIndex v = 0; v < g.size(); ++v) total += g[v] * m.product_cell_measure(v / m.num_states());
    return total;
}

}  // namespace

TEST_CASE("transfer matrix entries") {
    const WalkModel p3 = builtin_model("paper3");
    const auto g3 = build_product_graph(p3);
    const auto t3 = build_transfer_matrix(p3, g3);
    CHECK(t3.size() == 12);
    CHECK(t3.nonzeros() == 24);
    for (NodeIndex to = 0; to < 12; ++to)
        for (NodeIndex from = 0; from < 12; ++from)
            CHECK(t3.entry(to, from) == (g3.has_edge(from, to) ? R(1, 2) : R(0)));

    const WalkModel id = identity_single_cell();
    const auto tid = build_transfer_matrix(id, build_product_graph(id));
    CHECK(tid.size() == 1);
    CHECK(tid.entry(0, 0) == R(1));

    const WalkModel nf = builtin_model("nonfull");
    const auto tnf = build_transfer_matrix(nf, build_product_graph(nf));
    CHECK(tnf.entry(0, 0) == R(1, 2));
    CHECK(tnf.entry(1, 0) == R(1, 2));
    CHECK(tnf.entry(0, 1) == R(1));
    CHECK(tnf.entry(1, 1) == R(0));
}

TEST_CASE("sparsity pattern and mass preservation on random models") {
    testing::Gen gen(101);
    for (int trial = 0; trial < 80; ++trial) {
        const WalkModel m = build_model(testing::random_markov_model(gen));
        const auto g = build_product_graph(m);
        const auto t = build_transfer_matrix(m, g);
        CHECK(t.nonzeros() == g.num_edges());
        for (NodeIndex to = 0; to < t.size(); ++to)
            for (NodeIndex from = 0; from < t.size(); ++from)
                CHECK(t.entry(to, from).is_zero() != g.has_edge(from, to));
        std::vector<Rational> v(t.size());
        for (auto& x : v) x = R(static_cast<long>(testing::uniform_index(gen, 0, 9)), static_cast<long>(testing::uniform_index(gen, 1, 7)));
        CHECK(mu_integral(m, t.apply(v)) == mu_integral(m, v));
    }
}

TEST_CASE("stationary densities") {
    {
        const WalkModel m = builtin_model("nonfull");
        const auto g = build_product_graph(m);
        const auto classes = communication_classes(g);
        REQUIRE(classes.size() == 1);
        const auto h = stationary_density(m, build_transfer_matrix(m, g), classes[0]);
        CHECK(h.values == std::vector<Rational>{R(4, 3), R(2, 3)});
    }
    {
        const WalkModel m = identity_single_cell();
        const auto g = build_product_graph(m);
        const auto h = stationary_density(m, build_transfer_matrix(m, g), communication_classes(g)[0]);
        CHECK(h.values == std::vector<Rational>{R(1)});
    }
    {
        const WalkModel m = builtin_model("paper3");
        const auto g = build_product_graph(m);
        const auto t = build_transfer_matrix(m, g);
        const auto classes = communication_classes(g);
        const auto h = stationary_density(m, t, classes[0]);
        const auto oracle = power_density(m, t, classes[0]);
        for (NodeIndex v = 0; v < 12; ++v) {
            CHECK(h.values[v] == (classes[0].contains(v) ? R(3, 2) : R(0)));
            CHECK(std::abs(h.values[v].to_double() - oracle[v]) < 1e-9);
        }
        const auto small = stationary_density(m, t, classes[1]);
        for (NodeIndex v : classes[1].members) CHECK(small.values[v] == R(3));
    }
}

TEST_CASE("densities are exact positive fixed points") {
    testing::Gen gen(202);
    int checked = 0;
    for (int trial = 0; trial < 120; ++trial) {
        const WalkModel m = build_model(testing::random_markov_model(gen));
        const auto g = build_product_graph(m);
        const auto t = build_transfer_matrix(m, g);
        for (const auto& c : communication_classes(g)) {
            if (!c.closed) {
                CHECK_THROWS_AS(stationary_density(m, t, c), NotClosedClass);
                continue;
            }
            const auto h = stationary_density(m, t, c);
            const auto image = t.apply(h.values);
            for (NodeIndex v = 0; v < t.size(); ++v) {
                if (c.contains(v)) {
                    CHECK(h.values[v].sign() > 0);
                    CHECK(image[v] == h.values[v]);
                } else {
                    CHECK(h.values[v].is_zero());
                }
            }
            CHECK(mu_integral(m, h.values) == R(1));
            const auto oracle = power_density(m, t, c);
            for (NodeIndex v : c.members) CHECK(std::abs(h.values[v].to_double() - oracle[v]) < 1e-6);
            ++checked;
        }
    }
    CHECK(checked > 120);
}

TEST_CASE("occupation distributions") {
    const auto p3 = occupation_distribution(builtin_model("paper3"));
    CHECK_FALSE(p3.irreducible);
    REQUIRE(p3.classes.size() == 2);
    CHECK(p3.classes[0].pi == std::vector<Rational>{R(1, 4), R(1, 4), R(1, 2)});
    CHECK(p3.classes[1].pi == std::vector<Rational>{R(1, 2), R(1, 2), R(0)});

    const auto two = occupation_distribution(builtin_model("twostate"));
    CHECK(two.irreducible);
    REQUIRE(two.classes.size() == 1);
    CHECK(two.classes[0].pi == std::vector<Rational>{R(1, 2), R(1, 2)});

    const auto id = occupation_distribution(builtin_model("identity2"));
    CHECK_FALSE(id.irreducible);
    REQUIRE(id.classes.size() == 2);
    CHECK(id.classes[0].pi == std::vector<Rational>{R(1), R(0)});
    CHECK(id.classes[1].pi == std::vector<Rational>{R(0), R(1)});

    testing::Gen gen(303);
    for (int trial = 0; trial < 60; ++trial) {
        const WalkModel m = build_model(testing::random_markov_model(gen));
        for (const auto& c : occupation_distribution(m).classes) {
            Rational total(0);
            for (const auto& p : c.pi) {
                CHECK(p.sign() >= 0);
                total += p;
            }
            CHECK(total == R(1));
            if (m.num_states() == 1) CHECK(c.pi == std::vector<Rational>{R(1)});
        }
    }
}

TEST_CASE("state-independent colouring by cell recovers the base invariant measure") {
    testing::Gen gen(404);
    int checked = 0;
    for (int trial = 0; trial < 200 && checked < 40; ++trial) {
        RawModel raw = testing::random_markov_model(gen, 6, 1);
        const WalkModel base_only = build_model(raw);
        const auto base_occ = occupation_distribution(base_only);
        if (base_occ.classes.size() != 1) continue;
        const auto& h = base_occ.classes[0].density.values;

        const std::size_t n = raw.cells.size();
        std::vector<State> colour(n);
        for (CellIndex a = 0; a < n; ++a) colour[a] = a;
        const WalkModel coloured(base_only.base(), state_independent_env(n, colour));
        const auto occ = occupation_distribution(coloured);
        REQUIRE(occ.classes.size() == 1);
        for (CellIndex a = 0; a < n; ++a)
            CHECK(occ.classes[0].pi[a] == h[a] * base_only.base().partition().cell(a).measure());
        ++checked;
    }
    CHECK(checked == 40);
}

TEST_CASE("exact hitting probabilities") {
    const WalkModel p3 = builtin_model("paper3");
    const auto g = build_product_graph(p3);
    CHECK(hitting_probability(p3, g, 1, 2) == R(1, 2));
    CHECK(hitting_probability(p3, g, 0, 2) == R(1, 2));
    for (State s = 0; s < 3; ++s) CHECK(hitting_probability(p3, g, s, s) == R(1));

    RawModel raw = *builtin_raw("twostate");
    raw.environment = EnvironmentTable{{1, 1}, {1, 1}};
    const WalkModel constant = build_model(raw);
    const auto gc = build_product_graph(constant);
    CHECK(hitting_probability(constant, gc, 0, 0) == R(0));
    CHECK(hitting_probability(constant, gc, 0, 1) == R(1));
}

TEST_CASE("exact hitting probability is one exactly when the graph says almost surely") {
    testing::Gen gen(505);
    for (int trial = 0; trial < 150; ++trial) {
        const WalkModel m = build_model(testing::random_markov_model(gen));
        const auto g = build_product_graph(m);
        const auto classes = communication_classes(g);
        for (State i = 0; i < m.num_states(); ++i) {
            for (State j = 0; j < m.num_states(); ++j) {
                const Rational p = hitting_probability(m, g, i, j);
                CHECK(p.sign() >= 0);
                CHECK(p <= R(1));
                CHECK((p == R(1)) == !hitting_failure(g, classes, i, j).has_value());
            }
        }
    }
}
