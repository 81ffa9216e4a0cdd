#include "stdrep/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "stdrep/equivalence.hpp"
#include "stdrep/errors.hpp"

namespace stdrep::io {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw SpecError(where + ": " + what);
}

const json& field(const json& obj, const char* name, const std::string& where) {
    if (!obj.is_object()) fail(where, "expected an object");
    auto it = obj.find(name);
    if (it == obj.end()) fail(where + "." + name, "missing field");
    return *it;
}

std::string atom_label(const json& j, const std::string& where) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer()) return std::to_string(j.get<long long>());
    fail(where, "atom ids must be strings or integers");
}

std::vector<std::string> labels(const json& arr, const std::string& where) {
    if (!arr.is_array()) fail(where, "expected an array");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < arr.size(); ++i)
        out.push_back(atom_label(arr[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

std::vector<double> numbers(const json& arr, const std::string& where) {
    if (!arr.is_array()) fail(where, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number()) fail(where + "[" + std::to_string(i) + "]", "expected a number");
        out.push_back(arr[i].get<double>());
    }
    return out;
}

std::vector<std::string> split_key(const std::string& key) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : key) {
        if (c == ',') {
            parts.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(std::move(cur));
    return parts;
}

// Parses the value table of a kernel over `domain` labels.
std::vector<double> parse_values(const json& obj, const std::vector<std::string>& domain,
                                 std::size_t arity, bool symmetric, const std::string& where) {
    if (!obj.is_object()) fail(where, "expected an object mapping \"id,id,...\" to values");
    if (arity > 1)
        for (const auto& id : domain)
            if (id.find(',') != std::string::npos)
                fail(where, "atom id '" + id + "' contains ',' and cannot be used in tuple keys");

    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t k = 0; k < domain.size(); ++k) index.emplace(domain[k], k);

    const std::size_t d = domain.size();
    const std::size_t count = tuple_count(d, arity);
    std::vector<double> values(count, 0.0);
    std::vector<char> set(count, 0);
    std::vector<std::size_t> idx(arity);

    auto offset = [&](const std::vector<std::size_t>& t) {
        std::size_t off = 0;
        for (auto c : t) off = off * d + c;
        return off;
    };
    auto store = [&](const std::vector<std::size_t>& t, double v, const std::string& key) {
        const std::size_t off = offset(t);
        if (set[off] && values[off] != v)
            fail(where + "[\"" + key + "\"]", "conflicts with another entry of the same orbit");
        values[off] = v;
        set[off] = 1;
    };

    for (const auto& [key, val] : obj.items()) {
        const auto parts = split_key(key);
        if (parts.size() != arity)
            fail(where + "[\"" + key + "\"]", "key has " + std::to_string(parts.size()) +
                                                  " components, arity is " + std::to_string(arity));
        for (std::size_t r = 0; r < arity; ++r) {
            auto it = index.find(parts[r]);
            if (it == index.end()) fail(where + "[\"" + key + "\"]", "unknown atom '" + parts[r] + "'");
            idx[r] = it->second;
        }
        if (!val.is_number()) fail(where + "[\"" + key + "\"]", "expected a number");
        const double v = val.get<double>();
        if (symmetric) {
            auto t = idx;
            std::sort(t.begin(), t.end());
            do store(t, v, key);
            while (std::next_permutation(t.begin(), t.end()));
        } else {
            store(idx, v, key);
        }
    }

    std::vector<std::size_t> t(arity, 0);
    do {
        if (!set[offset(t)]) {
            std::string key;
            for (std::size_t r = 0; r < arity; ++r) key += (r ? "," : "") + domain[t[r]];
            fail(where, "missing entry for \"" + key + "\"");
        }
    } while (next_tuple(t, d));
    return values;
}

} // namespace

ValueSpace parse_value_space(const json& j, const std::string& where) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "unit") return ValueSpace::unit();
        if (s == "real") return ValueSpace::real();
        throw KindError(where + ": unsupported value space '" + s + "'");
    }
    if (j.is_object() && j.contains("labels")) {
        const auto& k = j["labels"];
        if (!k.is_number_integer() || k.get<long long>() < 1)
            throw KindError(where + ".labels: expected a positive integer");
        return ValueSpace::finite_labels(k.get<std::size_t>());
    }
    throw KindError(where + ": expected \"unit\", \"real\" or {\"labels\": K}");
}

json value_space_json(const ValueSpace& vs) {
    switch (vs.kind) {
    case ValueKind::Real: return "real";
    case ValueKind::UnitInterval: return "unit";
    case ValueKind::FiniteLabels: return json{{"labels", vs.labels}};
    }
    return nullptr;
}

Cdf parse_cdf(const json& j, const std::string& where) {
    const auto& kind = field(j, "kind", where);
    const auto& pts = field(j, "points", where);
    if (!pts.is_array() || pts.empty()) fail(where + ".points", "expected a nonempty array");
    std::vector<double> xs;
    std::vector<double> cs;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& p = pts[i];
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
            fail(where + ".points[" + std::to_string(i) + "]", "expected [x, c]");
        xs.push_back(p[0].get<double>());
        cs.push_back(p[1].get<double>());
    }
    try {
        if (kind == "step") return Cdf::step(std::move(xs), std::move(cs));
        if (kind == "pwl") return Cdf::piecewise_linear(std::move(xs), std::move(cs));
    } catch (const SpecError& e) {
        fail(where, e.what());
    }
    throw KindError(where + ".kind: expected \"step\" or \"pwl\"");
}

json cdf_json(const Cdf& cdf) {
    json pts = json::array();
    for (std::size_t i = 0; i < cdf.xs().size(); ++i) pts.push_back({cdf.xs()[i], cdf.cs()[i]});
    return {{"kind", cdf.kind() == CdfKind::Step ? "step" : "pwl"}, {"points", pts}};
}

SpecFile parse_spec(const json& doc) {
    if (!doc.is_object()) fail("$", "spec must be a JSON object");
    SpecFile spec;
    std::vector<std::string> domain;

    if (doc.contains("partition")) {
        const auto& p = doc["partition"];
        auto breaks = numbers(field(p, "breakpoints", "partition"), "partition.breakpoints");
        auto cells = labels(field(p, "cell_labels", "partition"), "partition.cell_labels");
        try {
            spec.partition = std::make_shared<const IntervalPartition>(std::move(breaks), cells);
        } catch (const SpecError& e) {
            fail("partition", e.what());
        }
        domain = std::move(cells);
    } else {
        const json& s = doc.contains("space") ? doc["space"] : doc;
        const std::string where = doc.contains("space") ? "space" : "$";
        SpaceSpec raw{labels(field(s, "atoms", where), where + ".atoms"),
                      numbers(field(s, "probs", where), where + ".probs")};
        try {
            spec.space = std::make_shared<const DiscreteSpace>(validate_space(std::move(raw)));
        } catch (const SpecError& e) {
            fail(where, e.what());
        }
        domain = spec.space->atom_ids();
    }

    if (doc.contains("generators")) {
        const auto& g = doc["generators"];
        if (!g.is_array()) fail("generators", "expected an array of atom-id lists");
        Generators gens;
        for (std::size_t i = 0; i < g.size(); ++i)
            gens.push_back(labels(g[i], "generators[" + std::to_string(i) + "]"));
        if (spec.space) cantor_encode(*spec.space, gens); // reject unknown ids early
        spec.generators = std::move(gens);
    }

    if (doc.contains("kernels")) {
        const auto& ks = doc["kernels"];
        if (!ks.is_array()) fail("kernels", "expected an array");
        std::vector<Kernel> kernels;
        for (std::size_t i = 0; i < ks.size(); ++i) {
            const std::string where = "kernels[" + std::to_string(i) + "]";
            const auto& kj = ks[i];
            const auto& name = field(kj, "name", where);
            if (!name.is_string()) fail(where + ".name", "expected a string");
            const auto& ar = field(kj, "arity", where);
            if (!ar.is_number_integer() || ar.get<long long>() < 1)
                throw ArityError(where + ".arity: expected a positive integer");
            const std::size_t arity = ar.get<std::size_t>();
            const bool symmetric = kj.value("symmetric", false);
            const ValueSpace vs = kj.contains("value_space")
                                      ? parse_value_space(kj["value_space"], where + ".value_space")
                                      : ValueSpace::real();
            auto values = parse_values(field(kj, "values", where), domain, arity, symmetric,
                                       where + ".values");
            try {
                if (spec.space)
                    kernels.push_back(Kernel::table(name.get<std::string>(), spec.space, arity, vs,
                                                    std::move(values), symmetric));
                else
                    kernels.push_back(Kernel::step(name.get<std::string>(), spec.partition, arity,
                                                   vs, std::move(values), symmetric));
            } catch (const SpecError& e) {
                fail(where, e.what());
            }
        }
        try {
            spec.family = KernelFamily(std::move(kernels));
        } catch (const SpecError& e) {
            fail("kernels", e.what());
        }
    }

    if (doc.contains("cdfs")) {
        const auto& cj = doc["cdfs"];
        if (!cj.is_array()) fail("cdfs", "expected an array");
        for (std::size_t i = 0; i < cj.size(); ++i) {
            const std::string where = "cdfs[" + std::to_string(i) + "]";
            spec.cdfs.push_back({cj[i].value("name", "cdf" + std::to_string(i)),
                                 parse_cdf(cj[i], where)});
        }
    }
    return spec;
}

SpecFile parse_spec_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SpecError(std::string("invalid JSON: ") + e.what());
    }
    return parse_spec(doc);
}

SpecFile load_spec(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SpecError(path.string() + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_spec_text(buf.str());
    } catch (const SpecError& e) {
        throw SpecError(path.string() + ": " + e.what());
    }
}

json kernel_json(const Kernel& k) {
    const auto& domain = k.domain_labels();
    json values = json::object();
    std::vector<std::size_t> t(k.arity(), 0);
    do {
        if (k.symmetric() && !std::is_sorted(t.begin(), t.end())) continue;
        std::string key;
        for (std::size_t r = 0; r < t.size(); ++r) key += (r ? "," : "") + domain[t[r]];
        values[key] = k.at(t);
    } while (next_tuple(t, k.domain_size()));
    return {{"name", k.name()},
            {"arity", k.arity()},
            {"symmetric", k.symmetric()},
            {"value_space", value_space_json(k.value_space())},
            {"values", values}};
}

json represented_json(const KernelFamily& step_family) {
    const auto& p = *step_family.partition();
    json doc;
    doc["partition"] = {{"breakpoints", p.breakpoints()}, {"cell_labels", p.cell_labels()}};
    doc["kernels"] = json::array();
    for (const auto& k : step_family.kernels()) doc["kernels"].push_back(kernel_json(k));
    return doc;
}

json source_json(const KernelFamily& table_family, const std::optional<Generators>& generators) {
    const auto& s = *table_family.space();
    json doc;
    doc["space"] = {{"atoms", s.atom_ids()}, {"probs", s.probs()}};
    if (generators) doc["generators"] = *generators;
    doc["kernels"] = json::array();
    for (const auto& k : table_family.kernels()) doc["kernels"].push_back(kernel_json(k));
    return doc;
}

std::pair<SpacePtr, KernelFamily> as_table_family(const SpecFile& spec) {
    if (spec.family.empty()) throw SpecError("kernels: spec defines no kernels");
    if (spec.family.body() == KernelBody::Table) return {spec.space, spec.family};
    return step_family_as_space(spec.family);
}

} // namespace stdrep::io
