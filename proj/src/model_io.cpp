#include "brwre/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace brwre {

using nlohmann::json;

RawModel parse_model_json(const std::string& text) {
    json j = json::parse(text);
    RawModel raw;
    raw.dimension = j.at("dimension").get<int>();
    for (const auto& step : j.at("steps"))
        raw.steps.push_back(step.get<std::vector<std::int64_t>>());
    for (const auto& vec : j.at("offspring_vectors")) {
        std::map<int, std::int64_t> counts;
        for (auto it = vec.begin(); it != vec.end(); ++it)
            counts[std::stoi(it.key())] = it.value().get<std::int64_t>();
        raw.offspring_vectors.push_back(std::move(counts));
    }
    for (const auto& law : j.at("site_laws")) {
        std::map<int, std::string> atoms;
        for (auto it = law.begin(); it != law.end(); ++it)
            atoms[std::stoi(it.key())] = it.value().get<std::string>();
        raw.site_laws.push_back(std::move(atoms));
    }
    for (const auto& entry : j.at("Q")) {
        raw.q.emplace_back(entry.at("law_index").get<int>(),
                           entry.at("weight").get<std::string>());
    }
    return raw;
}

std::string model_to_json(const EnvironmentLaw& law) {
    json j;
    j["dimension"] = law.dimension();
    json steps = json::array();
    for (const auto& s : law.step_set.steps) {
        json coords = json::array();
        for (int i = 0; i < law.dimension(); ++i) coords.push_back(s[i]);
        steps.push_back(coords);
    }
    j["steps"] = steps;

    std::vector<OffspringVector> vectors;
    auto vector_index = [&](const OffspringVector& v) {
        for (size_t i = 0; i < vectors.size(); ++i)
            if (vectors[i] == v) return static_cast<int>(i);
        vectors.push_back(v);
        return static_cast<int>(vectors.size() - 1);
    };

    json laws = json::array();
    for (const auto& sl : law.support) {
        json atoms = json::object();
        for (const auto& a : sl.atoms)
            atoms[std::to_string(vector_index(a.vector))] = a.probability.str();
        laws.push_back(atoms);
    }

    json vecs = json::array();
    for (const auto& v : vectors) {
        json counts = json::object();
        for (auto& [idx, cnt] : v.counts) counts[std::to_string(idx)] = cnt;
        vecs.push_back(counts);
    }
    j["offspring_vectors"] = vecs;
    j["site_laws"] = laws;

    json q = json::array();
    for (size_t i = 0; i < law.weights.size(); ++i)
        q.push_back({{"law_index", static_cast<int>(i)}, {"weight", law.weights[i].str()}});
    j["Q"] = q;
    return j.dump(2);
}

EnvironmentLaw load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return validate_model(parse_model_json(buf.str()));
}

} // namespace brwre
