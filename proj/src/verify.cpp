#include "vnlab/verify.hpp"

#include "vnlab/algebra.hpp"
#include "vnlab/hilbmod.hpp"
#include "vnlab/intertwine.hpp"
#include "vnlab/linops.hpp"
#include "vnlab/selfdual.hpp"

#include <chrono>
#include <cmath>
#include <string>

namespace vnlab {

namespace {

class StageClock {
public:
    StageClock() : start_(std::chrono::steady_clock::now()) {}
    double elapsed_ms() const {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }
    void restart() { start_ = std::chrono::steady_clock::now(); }

private:
    std::chrono::steady_clock::time_point start_;
};

struct Pipeline {
    const Instance& inst;
    const VerifyOptions& opts;
    Report& report;
    StageClock clock;

    bool record(const std::string& name, double value, double threshold,
                const std::string& note = "") {
        CheckRecord c;
        c.name = name;
        c.value = value;
        c.tolerance = threshold;
        c.passed = value <= threshold;
        c.elapsed_ms = clock.elapsed_ms();
        if (!c.passed) c.note = note;
        report.checks.push_back(std::move(c));
        clock.restart();
        return report.checks.back().passed;
    }

    void run();
};

void Pipeline::run() {
    const Tolerance tol = opts.tol;
    const Index n = inst.dim_G;

    // --- Base algebra -----------------------------------------------------
    const OperatorAlgebra base = generate_algebra(inst.algebra_generators, n, tol);
    {
        const AlgebraDiagnostics d = algebra_diagnostics(base, tol);
        record("algebra_invariants", d.worst(),
               tol.cutoff(std::sqrt(static_cast<double>(n))));
    }

    double dc_distance = 0.0;
    const bool dc_ok = double_commutant_check(base, tol, &dc_distance);
    record("algebra_double_commutant", dc_distance, tol.rel_eps);
    if (!dc_ok) return;

    const OperatorAlgebra lifted = commutant(base, tol);
    if (inst.spec) {
        record("commutant_dimension",
               std::abs(static_cast<double>(lifted.dim()) -
                        static_cast<double>(inst.spec->expected_commutant_dim())),
               0.5, "commutant dimension differs from the block bookkeeping");
    }

    // --- Module and interior tensor product --------------------------------
    AbstractModule mod;
    if (inst.is_gns) {
        mod = gns_module(base, inst.choi, tol);
    } else {
        mod.algebra = base;
        mod.k = inst.k;
        mod.gram = inst.gram;
        validate_module(mod, tol);
    }

    const TensorRealization tensor = tensor_with_G(mod, tol);
    const Index m = tensor.dim_H;
    const double gram_scale =
        std::max(1.0, frobenius(mod.gram_block_matrix()));
    {
        double worst = 0.0;
        for (Index i = 0; i < mod.k; ++i)
            for (Index j = 0; j < mod.k; ++j)
                worst = std::max(
                    worst,
                    frobenius(ComplexMatrix(
                        tensor.lifts[static_cast<size_t>(i)].adjoint() *
                            tensor.lifts[static_cast<size_t>(j)] -
                        mod.gram[static_cast<size_t>(i)][static_cast<size_t>(j)])));
        record("tensor_gram_reproduced", worst, tol.cutoff(gram_scale));
    }
    {
        double value = 0.0;
        if (m > 0) {
            ComplexMatrix stacked(m, mod.k * n);
            for (Index i = 0; i < mod.k; ++i)
                stacked.middleCols(i * n, n) = tensor.lifts[static_cast<size_t>(i)];
            Eigen::BDCSVD<ComplexMatrix> svd(stacked);
            const auto& sv = svd.singularValues();
            const double smax = sv.size() > 0 ? sv(0) : 0.0;
            const double smin = sv.size() >= m ? sv(m - 1) : 0.0;
            value = smin > tol.cutoff(smax) ? 0.0 : 1.0;
        }
        if (!record("tensor_totality", value, 0.5,
                    "module columns do not span the target space"))
            return;
    }

    const ConcreteModule module = module_span_closure(tensor.lifts, base, tol);

    // --- Commutant lifting --------------------------------------------------
    const Representation rho = commutant_lifting(lifted, module, tol);
    {
        const RepresentationDiagnostics d = representation_diagnostics(rho, tol);
        record("lifting_unital", d.unital_residual, tol.cutoff(1.0));
        record("lifting_multiplicative", d.multiplicative_residual, tol.cutoff(1.0));
        record("lifting_star", d.star_residual, tol.cutoff(1.0));
    }
    if (!record("lifting_intertwines", intertwining_residual(rho, module),
                tol.cutoff(1.0)))
        return;

    // --- Intertwiner center and adjointables --------------------------------
    const ConcreteModule center = center_intertwiners(lifted, rho, n, m, base, tol);
    record("center_equals_module",
           subspace_equal(module.span, center.span, tol).distance, tol.rel_eps,
           "intertwiner center differs from the module span");

    const AdjointablePair adjointables = adjointable_algebra(module, rho, tol);
    record("adjointables_match",
           subspace_equal(adjointables.direct.span, adjointables.via_commutant.span,
                          tol)
               .distance,
           tol.rel_eps,
           "direct adjointable computation differs from the lifted commutant");

    // --- Linking algebra -----------------------------------------------------
    const OperatorAlgebra linking =
        build_linking_algebra(base, module, adjointables.direct, tol);
    {
        const LinkingCommutantCheck c =
            check_linking_commutant(linking, lifted, rho, tol);
        record("linking_commutant_diagonal", c.distance, tol.rel_eps,
               "linking-algebra commutant is not the diagonal model");
        record("linking_commutant_dimension",
               std::abs(static_cast<double>(c.commutant_dim) -
                        static_cast<double>(c.expected_dim)),
               0.5, "linking-algebra commutant has unexpected dimension");
    }
    {
        const LinkingBicommutantCheck c =
            check_linking_bicommutant(linking, n, m, center, tol);
        record("linking_bicommutant", c.bicommutant_distance, tol.rel_eps,
               "double commutant enlarged the linking algebra");
        record("linking_corner_center", c.corner_distance, tol.rel_eps,
               "bicommutant corner differs from the intertwiner center");
    }

    // --- Functionals ---------------------------------------------------------
    for (size_t f = 0; f < inst.functional_values.size(); ++f) {
        const std::string prefix = "functional_" + std::to_string(f);
        if (inst.functional_values[f].size() != module.generators.size())
            throw ValidationError("functionals[" + std::to_string(f) +
                                  "]: expected one value per module generator (" +
                                  std::to_string(module.generators.size()) + ")");

        Functional fun;
        fun.module = module;
        fun.values = inst.functional_values[f];

        const FunctionalValidation v = validate_functional(fun, tol);
        if (!v.valid)
            throw ValidationError("functionals[" + std::to_string(f) +
                                  "]: relation-incompatible (residual " +
                                  std::to_string(v.worst_residual) + ")");

        double vscale = 1.0;
        for (const auto& val : fun.values) vscale = std::max(vscale, frobenius(val));

        const ComplexMatrix lphi = build_L_phi(fun, tol);
        {
            double worst = 0.0;
            for (size_t i = 0; i < fun.values.size(); ++i)
                worst = std::max(worst, frobenius(ComplexMatrix(
                                            lphi * module.generators[i] - fun.values[i])));
            record(prefix + "_lphi_solves", worst, tol.cutoff(vscale));
        }
        {
            double worst = 0.0;
            for (size_t j = 0; j < rho.images.size(); ++j)
                worst = std::max(
                    worst, frobenius(ComplexMatrix(lphi * rho.images[j] -
                                                   lifted.basis[j] * lphi)));
            record(prefix + "_lphi_intertwines", worst,
                   tol.cutoff(std::max(1.0, frobenius(lphi))));
        }

        const ComplexMatrix y = riesz_representative(fun, tol);
        record(prefix + "_riesz_membership", module.span.residual(y),
               tol.cutoff(std::max(1.0, frobenius(y))));
        {
            double worst = 0.0;
            for (size_t i = 0; i < fun.values.size(); ++i)
                worst = std::max(worst,
                                 frobenius(ComplexMatrix(y.adjoint() * module.generators[i] -
                                                         fun.values[i])));
            record(prefix + "_riesz_reproduces", worst, tol.cutoff(vscale));
        }
        {
            Functional again;
            again.module = module;
            again.values.reserve(fun.values.size());
            for (const auto& lift : module.generators)
                again.values.push_back(y.adjoint() * lift);
            const ComplexMatrix y2 = riesz_representative(again, tol);
            record(prefix + "_riesz_roundtrip", frobenius(ComplexMatrix(y2 - y)),
                   tol.cutoff(std::max(1.0, frobenius(y))));
        }
        {
            const NormCheckReport norms =
                norm_check(fun, opts.samples, opts.sample_seed, tol);
            record(prefix + "_norm_equality", std::abs(norms.opnorm - norms.rieszn),
                   tol.cutoff(std::max(1.0, norms.opnorm)));
            record(prefix + "_sampled_lower_bound",
                   std::max(0.0, norms.sampled_lb - norms.opnorm),
                   tol.cutoff(std::max(1.0, norms.opnorm)),
                   "sampled lower bound exceeds the operator norm");
        }
    }
}

}  // namespace

Report run_verification(const Instance& inst, const VerifyOptions& opts) {
    Report report;
    report.tolerance = opts.tol.rel_eps;
    report.samples = opts.samples;
    Pipeline pipeline{inst, opts, report, StageClock{}};
    try {
        pipeline.run();
    } catch (const NotWellDefinedError& e) {
        report.checks.push_back({"pipeline", false, 1.0, 0.0, 0.0, e.what()});
    } catch (const NotModuleError& e) {
        report.checks.push_back({"pipeline", false, 1.0, 0.0, 0.0, e.what()});
    } catch (const InvalidFunctionalError& e) {
        report.checks.push_back({"pipeline", false, 1.0, 0.0, 0.0, e.what()});
    } catch (const InternalInconsistencyError& e) {
        report.checks.push_back({"pipeline", false, 1.0, 0.0, 0.0, e.what()});
    }
    // Input-grade errors (validation, parse, positivity of stored data)
    // propagate to the caller.
    return report;
}

}  // namespace vnlab
