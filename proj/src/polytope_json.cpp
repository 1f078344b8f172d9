#include "polystab/polytope_json.hpp"

#include <json.hpp>

#include "polystab/errors.hpp"

namespace polystab {

namespace {

using nlohmann::json;

json matrices_to_json(const MatrixPolytope& p) {
    json rows = json::array();
    for (const Matrix& m : p.matrices) rows.push_back(m.data());
    return rows;
}

json polytope_body(const MatrixPolytope& p) {
    p.validate();
    return json{{"n", p.dim()}, {"k", p.k()}, {"matrices", matrices_to_json(p)}};
}

} // namespace

std::string polytope_to_json(const MatrixPolytope& p) { return polytope_body(p).dump(2) + "\n"; }

std::string instance_to_json(const ReductionInstance& inst) {
    json doc = polytope_body(inst.polytope);
    doc["meta"] = json{{"kind", to_string(inst.kind)},
                       {"j", inst.j},
                       {"r", inst.r},
                       {"graph", to_dimacs(inst.source)}};
    return doc.dump(2) + "\n";
}

LoadedPolytope polytope_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("polytope json: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("n") || !doc.contains("k") || !doc.contains("matrices"))
        throw ParseError("polytope json: expected object with n, k, matrices");

    LoadedPolytope out;
    try {
        const int n = doc.at("n").get<int>();
        const int k = doc.at("k").get<int>();
        if (n <= 0 || k <= 0) throw ParseError("polytope json: n and k must be positive");
        const json& mats = doc.at("matrices");
        if (!mats.is_array() || static_cast<int>(mats.size()) != k)
            throw ParseError("polytope json: matrices must be an array of k entries");
        for (const json& flat : mats) {
            auto values = flat.get<std::vector<double>>();
            if (static_cast<int>(values.size()) != n * n)
                throw ParseError("polytope json: matrix entry count does not equal n*n");
            Matrix m(n, n);
            m.data() = std::move(values);
            out.polytope.matrices.push_back(std::move(m));
        }
        out.polytope.validate();
    } catch (const json::exception& e) {
        throw ParseError(std::string("polytope json: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("polytope json: ") + e.what());
    }

    if (doc.contains("meta")) {
        try {
            const json& meta = doc.at("meta");
            const ReductionKind kind =
                reduction_kind_from_string(meta.at("kind").get<std::string>());
            const int j = meta.at("j").get<int>();
            const double r = meta.at("r").get<double>();
            const Graph g = parse_dimacs(meta.at("graph").get<std::string>());
            ReductionInstance rebuilt = build_reduction(g, j, kind);
            if (rebuilt.polytope.k() != out.polytope.k() ||
                rebuilt.polytope.dim() != out.polytope.dim())
                throw ParseError("polytope json: meta shape does not match stored matrices");
            double dev = 0.0;
            for (int i = 0; i < rebuilt.polytope.k(); ++i)
                dev = std::max(dev, max_abs_diff(rebuilt.polytope.matrices[(std::size_t)i],
                                                 out.polytope.matrices[(std::size_t)i]));
            if (dev > 1e-12)
                throw ParseError("polytope json: stored matrices deviate from the meta "
                                 "reconstruction by " +
                                 std::to_string(dev));
            if (std::abs(rebuilt.r - r) > 1e-12)
                throw ParseError("polytope json: meta r does not match the kind/j derivation");
            // Keep the stored matrices as the authoritative payload.
            rebuilt.polytope = out.polytope;
            out.instance = std::move(rebuilt);
        } catch (const json::exception& e) {
            throw ParseError(std::string("polytope json meta: ") + e.what());
        } catch (const std::invalid_argument& e) {
            throw ParseError(std::string("polytope json meta: ") + e.what());
        }
    }
    return out;
}

} // namespace polystab
