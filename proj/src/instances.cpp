#include "vnlab/instances.hpp"

#include "vnlab/jsonio.hpp"

#include <json.hpp>

#include <Eigen/QR>

#include <fstream>
#include <sstream>

namespace vnlab {

using nlohmann::json;

Index InstanceSpec::ambient_dim() const {
    Index n = 0;
    for (const auto& b : blocks) n += b.irrep_dim * b.multiplicity;
    return n;
}

Index InstanceSpec::expected_commutant_dim() const {
    Index d = 0;
    for (const auto& b : blocks) d += b.multiplicity * b.multiplicity;
    return d;
}

void InstanceSpec::validate() const {
    if (blocks.empty()) throw InvalidInputError("spec: no blocks");
    for (const auto& b : blocks)
        if (b.irrep_dim < 1 || b.multiplicity < 1)
            throw InvalidInputError("spec: block sizes must be positive");
    if (ambient_dim() > kAmbientDimCap)
        throw InvalidInputError("spec: ambient dimension exceeds the cap of " +
                                std::to_string(kAmbientDimCap));
    if (k < 1 || k > kModuleGeneratorCap)
        throw InvalidInputError("spec: k must be between 1 and " +
                                std::to_string(kModuleGeneratorCap));
    if (functional_count < 0)
        throw InvalidInputError("spec: functional_count must be nonnegative");
}

std::vector<BlockSpec> InstanceSpec::parse_blocks(const std::string& text) {
    std::vector<BlockSpec> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto x = item.find('x');
        if (x == std::string::npos)
            throw InvalidInputError("blocks: expected entries like 2x1, got '" +
                                    item + "'");
        try {
            out.push_back({static_cast<Index>(std::stol(item.substr(0, x))),
                           static_cast<Index>(std::stol(item.substr(x + 1)))});
        } catch (const std::exception&) {
            throw InvalidInputError("blocks: cannot parse '" + item + "'");
        }
    }
    if (out.empty()) throw InvalidInputError("blocks: empty description");
    return out;
}

ComplexMatrix haar_unitary(Index n, SplitMix64& rng) {
    ComplexMatrix z(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) z(i, j) = rng.cnormal();
    Eigen::HouseholderQR<ComplexMatrix> qr(z);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
    ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < n; ++j) {
        const double mag = std::abs(r(j, j));
        q.col(j) *= mag > 1e-300 ? r(j, j) / mag : Complex(1, 0);
    }
    return q;
}

OperatorAlgebra random_algebra(const InstanceSpec& spec, Tolerance tol) {
    spec.validate();
    const Index n = spec.ambient_dim();
    SplitMix64 rng(spec.seed);
    const ComplexMatrix u = haar_unitary(n, rng);

    std::vector<ComplexMatrix> generators;
    Index offset = 0;
    for (const auto& block : spec.blocks) {
        const Index bn = block.irrep_dim;
        const Index bm = block.multiplicity;
        for (Index p = 0; p < bn; ++p) {
            for (Index q = 0; q < bn; ++q) {
                ComplexMatrix g = ComplexMatrix::Zero(n, n);
                for (Index s = 0; s < bm; ++s)
                    g(offset + p * bm + s, offset + q * bm + s) = 1.0;
                generators.push_back(u * g * u.adjoint());
            }
        }
        offset += bn * bm;
    }
    return generate_algebra(generators, n, tol);
}

AbstractModule random_module(const OperatorAlgebra& algebra, Index k,
                             std::uint64_t seed, Tolerance tol) {
    const Index n = algebra.ambient_dim;
    SplitMix64 rng(seed);

    // k+1 random rows of algebra elements; the Gram matrix of the columns
    // is PSD with entries inside the algebra by construction.
    std::vector<std::vector<ComplexMatrix>> rows(static_cast<size_t>(k + 1));
    for (auto& row : rows) {
        row.resize(static_cast<size_t>(k));
        for (auto& entry : row) {
            entry = ComplexMatrix::Zero(n, n);
            for (const auto& b : algebra.basis) entry += rng.cnormal() * b;
        }
    }

    AbstractModule out;
    out.algebra = algebra;
    out.k = k;
    out.gram.assign(static_cast<size_t>(k),
                    std::vector<ComplexMatrix>(static_cast<size_t>(k)));
    for (Index i = 0; i < k; ++i) {
        for (Index j = 0; j < k; ++j) {
            ComplexMatrix g = ComplexMatrix::Zero(n, n);
            for (const auto& row : rows)
                g += row[static_cast<size_t>(i)].adjoint() * row[static_cast<size_t>(j)];
            out.gram[static_cast<size_t>(i)][static_cast<size_t>(j)] = std::move(g);
        }
    }
    validate_module(out, tol);
    return out;
}

ComplexMatrix random_cp_map(Index n, Index rank, std::uint64_t seed) {
    SplitMix64 rng(seed);
    ComplexMatrix choi = ComplexMatrix::Zero(n * n, n * n);
    for (Index s = 0; s < rank; ++s) {
        ComplexMatrix kraus(n, n);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j) kraus(i, j) = rng.cnormal();
        const ComplexVector w = vec(kraus);
        choi += w * w.adjoint();
    }
    return choi;
}

Functional random_functional(const ConcreteModule& e, std::uint64_t seed) {
    SplitMix64 rng(seed);
    ComplexMatrix y0 = ComplexMatrix::Zero(e.dim_H, e.dim_G);
    for (const auto& t : e.basis) y0 += rng.cnormal() * t;

    Functional out;
    out.module = e;
    out.values.reserve(e.generators.size());
    for (const auto& lift : e.generators)
        out.values.push_back(y0.adjoint() * lift);
    return out;
}

Instance make_instance(const InstanceSpec& spec, Tolerance tol) {
    spec.validate();
    const Index n = spec.ambient_dim();

    Instance inst;
    inst.dim_G = n;
    inst.seed = spec.seed;
    inst.spec = spec;

    const OperatorAlgebra algebra = random_algebra(spec, tol);
    inst.algebra_generators = algebra.generators;

    const AbstractModule mod = random_module(algebra, spec.k, spec.seed + 1, tol);
    inst.k = spec.k;
    inst.gram = mod.gram;

    if (spec.functional_count > 0) {
        const TensorRealization tensor = tensor_with_G(mod, tol);
        const ConcreteModule e = module_span_closure(tensor.lifts, algebra, tol);
        for (Index f = 0; f < spec.functional_count; ++f) {
            const Functional fun =
                random_functional(e, spec.seed + 2 + static_cast<std::uint64_t>(f));
            inst.functional_values.push_back(fun.values);
        }
    }
    return inst;
}

// ---------------------------------------------------------------------------
// Canonical serialization
// ---------------------------------------------------------------------------

std::string instance_to_json(const Instance& inst) {
    std::string out;
    out += "{\n";
    out += "  \"dim_G\": " + std::to_string(inst.dim_G) + ",\n";

    out += "  \"algebra_generators\": [";
    for (size_t i = 0; i < inst.algebra_generators.size(); ++i) {
        out += i ? ",\n    " : "\n    ";
        out += json_matrix(inst.algebra_generators[i]);
    }
    out += inst.algebra_generators.empty() ? "],\n" : "\n  ],\n";

    if (inst.is_gns) {
        out += "  \"module\": {\n";
        out += "    \"type\": \"gns\",\n";
        out += "    \"choi\": " + json_matrix(inst.choi) + "\n";
        out += "  },\n";
    } else {
        out += "  \"module\": {\n";
        out += "    \"k\": " + std::to_string(inst.k) + ",\n";
        out += "    \"gram\": [\n";
        for (Index i = 0; i < inst.k; ++i) {
            out += "      [";
            for (Index j = 0; j < inst.k; ++j) {
                if (j) out += ",\n       ";
                out += json_matrix(inst.gram[static_cast<size_t>(i)][static_cast<size_t>(j)]);
            }
            out += i + 1 < inst.k ? "],\n" : "]\n";
        }
        out += "    ]\n";
        out += "  },\n";
    }

    out += "  \"functionals\": [";
    for (size_t f = 0; f < inst.functional_values.size(); ++f) {
        out += f ? ",\n    {\"values\": [" : "\n    {\"values\": [";
        const auto& values = inst.functional_values[f];
        for (size_t i = 0; i < values.size(); ++i) {
            if (i) out += ",\n                ";
            out += json_matrix(values[i]);
        }
        out += "]}";
    }
    out += inst.functional_values.empty() ? "],\n" : "\n  ],\n";

    out += "  \"seed\": " + std::to_string(inst.seed);
    if (inst.spec) {
        out += ",\n  \"spec\": {\"blocks\": [";
        for (size_t b = 0; b < inst.spec->blocks.size(); ++b) {
            if (b) out += ",";
            out += "[" + std::to_string(inst.spec->blocks[b].irrep_dim) + "," +
                   std::to_string(inst.spec->blocks[b].multiplicity) + "]";
        }
        out += "], \"k\": " + std::to_string(inst.spec->k);
        out += ", \"functional_count\": " + std::to_string(inst.spec->functional_count);
        out += "}";
    }
    out += "\n}\n";
    return out;
}

void save_instance(const Instance& inst, const std::string& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw InvalidInputError("cannot open for writing: " + path);
    file << instance_to_json(inst);
    if (!file) throw InvalidInputError("write failed: " + path);
}

namespace {

ComplexMatrix parse_matrix(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty())
        throw ValidationError(where + ": expected a nonempty array of rows");
    const size_t rows = j.size();
    size_t cols = 0;
    ComplexMatrix out;
    for (size_t i = 0; i < rows; ++i) {
        const auto& row = j[i];
        if (!row.is_array() || row.empty())
            throw ValidationError(where + ": row " + std::to_string(i) +
                                  " is not a nonempty array");
        if (i == 0) {
            cols = row.size();
            out.resize(static_cast<Index>(rows), static_cast<Index>(cols));
        } else if (row.size() != cols) {
            throw ValidationError(where + ": ragged rows");
        }
        for (size_t c = 0; c < cols; ++c) {
            const auto& z = row[c];
            if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number())
                throw ValidationError(where + ": entry (" + std::to_string(i) + "," +
                                      std::to_string(c) +
                                      ") is not a [re, im] pair");
            out(static_cast<Index>(i), static_cast<Index>(c)) =
                Complex(z[0].get<double>(), z[1].get<double>());
        }
    }
    if (!all_finite(out)) throw ValidationError(where + ": non-finite entries");
    return out;
}

}  // namespace

Instance parse_instance(const std::string& text, Tolerance tol) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("instance file: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("instance file: top level must be an object");

    Instance inst;

    if (!j.contains("dim_G") || !j["dim_G"].is_number_integer())
        throw ValidationError("field 'dim_G': expected integer");
    inst.dim_G = j["dim_G"].get<Index>();
    if (inst.dim_G < 1) throw ValidationError("field 'dim_G': must be positive");
    const Index n = inst.dim_G;

    if (!j.contains("algebra_generators") || !j["algebra_generators"].is_array())
        throw ValidationError("field 'algebra_generators': expected array");
    for (size_t i = 0; i < j["algebra_generators"].size(); ++i) {
        ComplexMatrix g = parse_matrix(j["algebra_generators"][i],
                                       "algebra_generators[" + std::to_string(i) + "]");
        if (g.rows() != n || g.cols() != n)
            throw ValidationError("algebra_generators[" + std::to_string(i) +
                                  "]: expected dim_G x dim_G");
        inst.algebra_generators.push_back(std::move(g));
    }

    if (!j.contains("module") || !j["module"].is_object())
        throw ValidationError("field 'module': expected object");
    const auto& jm = j["module"];
    if (jm.contains("type") && jm["type"] == "gns") {
        inst.is_gns = true;
        if (!jm.contains("choi"))
            throw ValidationError("module: gns module requires 'choi'");
        inst.choi = parse_matrix(jm["choi"], "module.choi");
        if (inst.choi.rows() != n * n || inst.choi.cols() != n * n)
            throw ValidationError("module.choi: expected dim_G^2 x dim_G^2");
    } else {
        if (!jm.contains("k") || !jm["k"].is_number_integer())
            throw ValidationError("module.k: expected integer");
        inst.k = jm["k"].get<Index>();
        if (inst.k < 1) throw ValidationError("module.k: must be positive");
        if (!jm.contains("gram") || !jm["gram"].is_array() ||
            jm["gram"].size() != static_cast<size_t>(inst.k))
            throw ValidationError("module.gram: expected k rows of blocks");
        inst.gram.resize(static_cast<size_t>(inst.k));
        for (size_t i = 0; i < inst.gram.size(); ++i) {
            const auto& row = jm["gram"][i];
            if (!row.is_array() || row.size() != static_cast<size_t>(inst.k))
                throw ValidationError("module.gram: expected k blocks per row");
            for (size_t c = 0; c < row.size(); ++c) {
                ComplexMatrix g = parse_matrix(row[c], "module.gram[" + std::to_string(i) +
                                                           "][" + std::to_string(c) + "]");
                if (g.rows() != n || g.cols() != n)
                    throw ValidationError("module.gram: block is not dim_G x dim_G");
                inst.gram[i].push_back(std::move(g));
            }
        }
        // Stored hermiticity invariant.
        double scale = 0.0;
        for (const auto& row : inst.gram)
            for (const auto& g : row) scale = std::max(scale, frobenius(g));
        for (size_t i = 0; i < inst.gram.size(); ++i)
            for (size_t c = 0; c < inst.gram.size(); ++c)
                if (frobenius(inst.gram[i][c] - ComplexMatrix(inst.gram[c][i].adjoint())) >
                    tol.cutoff(scale))
                    throw ValidationError("gram hermiticity");
    }

    if (j.contains("functionals")) {
        if (!j["functionals"].is_array())
            throw ValidationError("field 'functionals': expected array");
        for (size_t f = 0; f < j["functionals"].size(); ++f) {
            const auto& jf = j["functionals"][f];
            if (!jf.is_object() || !jf.contains("values") || !jf["values"].is_array() ||
                jf["values"].empty())
                throw ValidationError("functionals[" + std::to_string(f) +
                                      "]: expected nonempty 'values' array");
            std::vector<ComplexMatrix> values;
            for (size_t i = 0; i < jf["values"].size(); ++i) {
                ComplexMatrix v =
                    parse_matrix(jf["values"][i], "functionals[" + std::to_string(f) +
                                                      "].values[" + std::to_string(i) + "]");
                if (v.rows() != n || v.cols() != n)
                    throw ValidationError("functional values must be dim_G x dim_G");
                values.push_back(std::move(v));
            }
            inst.functional_values.push_back(std::move(values));
        }
    }

    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
            throw ValidationError("field 'seed': expected unsigned integer");
        inst.seed = j["seed"].get<std::uint64_t>();
    }

    if (j.contains("spec") && j["spec"].is_object()) {
        InstanceSpec spec;
        spec.seed = inst.seed;
        const auto& js = j["spec"];
        if (js.contains("blocks") && js["blocks"].is_array()) {
            for (const auto& b : js["blocks"]) {
                if (!b.is_array() || b.size() != 2)
                    throw ValidationError("spec.blocks: expected [n, m] pairs");
                spec.blocks.push_back({b[0].get<Index>(), b[1].get<Index>()});
            }
        }
        if (js.contains("k")) spec.k = js["k"].get<Index>();
        if (js.contains("functional_count"))
            spec.functional_count = js["functional_count"].get<Index>();
        if (!spec.blocks.empty()) inst.spec = spec;
    }

    return inst;
}

std::string read_file_bytes(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw InvalidInputError("cannot open: " + path);
    std::stringstream ss;
    ss << file.rdbuf();
    return ss.str();
}

Instance load_instance(const std::string& path, Tolerance tol) {
    return parse_instance(read_file_bytes(path), tol);
}

}  // namespace vnlab
