#include "tetraverify/selftest.hpp"

#include <cmath>
#include <random>

#include "tetraverify/elliptic.hpp"
#include "tetraverify/oracles.hpp"
#include "tetraverify/rmatrix.hpp"
#include "tetraverify/sampling.hpp"
#include "tetraverify/smatrix.hpp"

namespace tetraverify {

namespace {

Check pass_if(std::string name, bool ok, nlohmann::json payload) {
    return {std::move(name), ok ? Status::Pass : Status::Fail, std::move(payload)};
}

EllipticTriple evaluate(double u, double k, const SelftestOptions& options) {
    EllipticTriple e = jacobi(u, k);
    if (options.inject_elliptic_fault) e.sn += 1e-6;
    return e;
}

Check elliptic_identities(const SelftestOptions& options) {
    double pythagoras = 0.0;
    double modulus_identity = 0.0;
    double circular = 0.0;
    double small_k = 0.0;
    for (int iu = 0; iu < 10; ++iu) {
        const double u = -3.0 + 6.0 * iu / 9.0;
        for (int ik = 0; ik < 10; ++ik) {
            const double k = 0.95 * ik / 9.0;
            const EllipticTriple e = evaluate(u, k, options);
            pythagoras = std::max(pythagoras, std::abs(e.sn * e.sn + e.cn * e.cn - 1.0));
            modulus_identity = std::max(modulus_identity, std::abs(e.dn * e.dn + k * k * e.sn * e.sn - 1.0));
        }
        const EllipticTriple zero = evaluate(u, 0.0, options);
        circular = std::max({circular, std::abs(zero.sn - std::sin(u)), std::abs(zero.cn - std::cos(u)),
                             std::abs(zero.dn - 1.0)});
        const EllipticTriple tiny = evaluate(u, 1e-8, options);
        small_k = std::max({small_k, std::abs(tiny.sn - std::sin(u)), std::abs(tiny.cn - std::cos(u)),
                            std::abs(tiny.dn - 1.0)});
    }
    const bool ok = pythagoras <= 1e-12 && modulus_identity <= 1e-12 && circular <= 1e-14 && small_k <= 1e-7;
    return pass_if("elliptic_identities", ok,
                   {{"sn2_plus_cn2_max", pythagoras},
                    {"dn2_plus_k2sn2_max", modulus_identity},
                    {"k0_vs_circular_max", circular},
                    {"k1e-8_vs_circular_max", small_k}});
}

Check elliptic_quarter_period(const SelftestOptions& options) {
    double worst = 0.0;
    for (double k : {0.0, 0.3, 0.5, 0.9}) {
        const EllipticTriple e = evaluate(quarter_period(k), k, options);
        worst = std::max({worst, std::abs(e.sn - 1.0), std::abs(e.cn)});
    }
    return pass_if("elliptic_quarter_period", worst <= 1e-10, {{"max_deviation", worst}});
}

Check embedding_oracle() {
    std::mt19937_64 rng = trial_rng(0, 0);
    std::uniform_int_distribution<long> entry(-9, 9);
    const std::vector<std::vector<int>> site_sets = {{1, 2}, {2, 3}, {1, 3}, {1, 2, 4}, {2, 4, 6}, {1, 3, 5}, {4, 5, 6}};
    std::size_t mismatches = 0;
    for (const auto& sites : site_sets) {
        const int n = sites.back() <= 3 ? 3 : 6;
        const Eigen::Index dim = Eigen::Index{1} << sites.size();
        ExactMatrix op(dim, dim);
        for (Eigen::Index r = 0; r < dim; ++r)
            for (Eigen::Index c = 0; c < dim; ++c) op(r, c) = Rational(entry(rng));
        if (embed_sites(op, std::span<const int>(sites), n) != oracle::embed_by_interleaving(op, sites, n)) {
            ++mismatches;
        }
    }
    return pass_if("embed_sites_oracle", mismatches == 0, {{"cases", site_sets.size()}, {"mismatches", mismatches}});
}

Check free_fermion_sweep() {
    std::mt19937_64 rng = trial_rng(0, 1);
    std::uniform_real_distribution<double> lambda(-2.0, 2.0);
    std::uniform_real_distribution<double> modulus(0.0, 0.95);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double li = lambda(rng);
        const double lj = lambda(rng);
        const double k = modulus(rng);
        for (RSign sign : {RSign::Symmetric, RSign::Twisted}) {
            const REntries<double> e = r_entries(li, lj, k, sign);
            worst = std::max(worst, std::abs(e.a * e.a + e.b * e.b - e.c * e.c - e.d * e.d));
        }
    }
    return pass_if("free_fermion_sweep", worst <= 1e-13, {{"cases", 400}, {"max_abs", worst}});
}

Check convergence_sweep() {
    const std::vector<double> lambdas(std::begin(kSweepLambdas), std::end(kSweepLambdas));
    nlohmann::json distances = nlohmann::json::array();
    std::vector<double> d;
    for (double k : {1e-1, 1e-2, 1e-3}) {
        d.push_back(closed_form_distance({1, 2, 3}, ApproxConfig(k, lambdas)));
        distances.push_back({{"k", k}, {"distance", d.back()}});
    }
    const bool ok = d[1] * 5.0 <= d[0] && d[2] * 5.0 <= d[1];
    return pass_if("k_to_zero_convergence", ok, {{"lambdas", lambdas}, {"sweep", distances}});
}

}  // namespace

std::vector<Check> run_selftest(const SelftestOptions& options) {
    return {elliptic_identities(options), elliptic_quarter_period(options), embedding_oracle(), free_fermion_sweep(),
            convergence_sweep()};
}

}  // namespace tetraverify
