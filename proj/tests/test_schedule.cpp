#include <doctest.h>

#include <cmath>

#include "lgelu/optim.hpp"
#include "lgelu/schedule.hpp"

using namespace lgelu;

namespace {

NetworkState schedule_net(std::uint64_t seed) {
    SplitMix64 rng(seed);
    return NetworkState({2, 4, 4, 4, 2}, ActivationKind::LambdaGelu,
                        init_profile(InitMode::Increasing, 3, 0.1), rng);
}

}  // namespace

TEST_SUITE("schedule") {

TEST_CASE("plan construction") {
    const AnnealPlan plan = AnnealPlan::make(40, 0.25, 160.0);
    CHECK(plan.total_epochs == 40);
    CHECK(plan.switch_epoch == 10);
    CHECK_FALSE(plan.captured());
    CHECK(AnnealPlan::make(2, 0.25, 5.0).switch_epoch == 1);  // clamped up to 1
    CHECK(AnnealPlan::make(12, 0.25, 5.0).switch_epoch == 3);
    CHECK_THROWS_AS(AnnealPlan::make(1, 0.25, 5.0), std::invalid_argument);
    CHECK_THROWS_AS(AnnealPlan::make(10, 0.25, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(AnnealPlan::make(10, 1.5, 5.0), std::invalid_argument);
}

TEST_CASE("lambda_at linear interpolation") {
    AnnealPlan plan;
    plan.total_epochs = 90;
    plan.switch_epoch = 15;
    plan.lambda_target = 160.0;
    plan.captured_lambdas = {2.0};

    SUBCASE("worked example: 15 of 75 annealed epochs") {
        CHECK(lambda_at(plan, 0, 30) == doctest::Approx(33.6).epsilon(1e-12));
    }
    SUBCASE("endpoint is exact") {
        CHECK(lambda_at(plan, 0, 90) == 160.0);
    }
    SUBCASE("integral midpoint is the exact arithmetic mean") {
        AnnealPlan mid;
        mid.total_epochs = 11;
        mid.switch_epoch = 3;
        mid.lambda_target = 160.0;
        mid.captured_lambdas = {1.7};
        CHECK(lambda_at(mid, 0, 7) == (1.7 + 160.0) / 2.0);
    }
    SUBCASE("monotone increasing toward a larger target") {
        double prev = plan.captured_lambdas[0];
        for (int e = 16; e <= 90; ++e) {
            const double cur = lambda_at(plan, 0, e);
            CHECK(cur > prev);
            prev = cur;
        }
    }
    SUBCASE("domain checks") {
        CHECK_THROWS_AS(lambda_at(plan, 0, 15), std::out_of_range);
        CHECK_THROWS_AS(lambda_at(plan, 0, 91), std::out_of_range);
        CHECK_THROWS_AS(lambda_at(plan, 1, 30), std::out_of_range);
        AnnealPlan uncaptured = AnnealPlan::make(10, 0.25, 160.0);
        CHECK_THROWS_AS(lambda_at(uncaptured, 0, 5), std::logic_error);
    }
}

TEST_CASE("apply_phase drives the freeze-capture-pin sequence") {
    NetworkState net = schedule_net(42);
    AnnealPlan plan = AnnealPlan::make(12, 0.25, 160.0);
    REQUIRE(plan.switch_epoch == 3);

    SUBCASE("learnable phase keeps parameters unfrozen") {
        for (int e = 1; e <= 3; ++e) {
            apply_phase(plan, net, e);
            for (int l = 0; l < net.num_activation_layers(); ++l) {
                CHECK_FALSE(net.layer(l).hardness.frozen());
            }
        }
        CHECK_FALSE(plan.captured());
    }

    SUBCASE("switch captures the live profile bitwise and freezes") {
        apply_phase(plan, net, 3);
        const std::vector<double> live = net.hardness_profile();
        apply_phase(plan, net, 4);
        CHECK(plan.captured_lambdas == live);
        for (int l = 0; l < net.num_activation_layers(); ++l) {
            CHECK(net.layer(l).hardness.frozen());
            CHECK(net.layer(l).hardness.lambda() == lambda_at(plan, l, 4));
        }
    }

    SUBCASE("final epoch pins lambda_target everywhere") {
        for (int e = 1; e <= 12; ++e) {
            apply_phase(plan, net, e);
        }
        for (int l = 0; l < net.num_activation_layers(); ++l) {
            CHECK(net.layer(l).hardness.lambda() == 160.0);
        }
    }

    SUBCASE("s stays bitwise constant through the annealed phase") {
        std::vector<double> s_at_switch;
        for (int e = 1; e <= 12; ++e) {
            apply_phase(plan, net, e);
            if (e == 4) {
                for (int l = 0; l < net.num_activation_layers(); ++l) {
                    s_at_switch.push_back(net.layer(l).hardness.s());
                }
            }
            if (e > 4) {
                for (int l = 0; l < net.num_activation_layers(); ++l) {
                    CHECK(net.layer(l).hardness.s() == s_at_switch[static_cast<std::size_t>(l)]);
                }
            }
        }
    }
}

TEST_CASE("evaluate_substitution") {
    SUBCASE("relu-trained checkpoint: substitution is the identity") {
        SplitMix64 rng(3);
        NetworkState net({2, 4, 2}, ActivationKind::Relu, init_profile(InitMode::Uniform, 1, 0.1), rng);
        int calls = 0;
        const SubstitutionResult result = evaluate_substitution(net, [&](const NetworkState& n) {
            ++calls;
            return forward(n, {0.5, -1.0})[0];
        });
        CHECK(calls == 2);
        CHECK(result.original_metric == result.substituted_metric);
    }
    SUBCASE("gelu checkpoint: substituted output differs") {
        SplitMix64 rng(4);
        NetworkState net({2, 4, 2}, ActivationKind::Gelu, init_profile(InitMode::Uniform, 1, 0.1), rng);
        const SubstitutionResult result = evaluate_substitution(
            net, [](const NetworkState& n) { return forward(n, {0.5, -1.0})[0]; });
        CHECK(result.original_metric != result.substituted_metric);
    }
    SUBCASE("hard-pinned checkpoint: outputs nearly coincide") {
        SplitMix64 rng(5);
        NetworkState net({2, 8, 8, 2}, ActivationKind::LambdaGelu,
                         init_profile(InitMode::Uniform, 2, 0.1), rng);
        for (int l = 0; l < net.num_activation_layers(); ++l) {
            net.layer(l).hardness.freeze();
            net.layer(l).hardness.pin_lambda(160.0);
        }
        const SubstitutionResult result = evaluate_substitution(
            net, [](const NetworkState& n) { return forward(n, {0.7, -0.3})[0]; });
        CHECK(std::fabs(result.original_metric - result.substituted_metric) < 0.05);
    }
}

}  // TEST_SUITE
