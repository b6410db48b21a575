#include "framefx/frame_config.hpp"

#include <fstream>
#include <map>

namespace framefx {

namespace {

using nlohmann::json;

std::string at(const std::string& ptr, const std::string& key) { return ptr + "/" + key; }
std::string at(const std::string& ptr, std::size_t i) { return ptr + "/" + std::to_string(i); }

const json& require(const json& obj, const std::string& key, const std::string& ptr) {
    if (!obj.is_object()) throw ConfigError(ptr, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ConfigError(at(ptr, key), "required field is missing");
    return *it;
}

double number(const json& v, const std::string& ptr) {
    if (!v.is_number()) throw ConfigError(ptr, "expected a number");
    return v.get<double>();
}

double positive(const json& v, const std::string& ptr) {
    const double x = number(v, ptr);
    if (!(x > 0.0)) throw ConfigError(ptr, "must be positive");
    return x;
}

std::size_t index(const json& v, const std::string& ptr, std::size_t limit, const char* what) {
    if (!v.is_number_integer() || v.get<long long>() < 0) throw ConfigError(ptr, "expected a non-negative integer");
    const auto i = v.get<std::size_t>();
    if (i >= limit)
        throw ConfigError(ptr, std::string(what) + " " + std::to_string(i) + " does not exist (count " +
                                   std::to_string(limit) + ")");
    return i;
}

const json& array(const json& v, const std::string& ptr) {
    if (!v.is_array()) throw ConfigError(ptr, "expected an array");
    return v;
}

std::string text(const json& v, const std::string& ptr) {
    if (!v.is_string()) throw ConfigError(ptr, "expected a string");
    return v.get<std::string>();
}

std::optional<double> optional_positive(const json& obj, const std::string& key, const std::string& ptr) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    return positive(*it, at(ptr, key));
}

std::size_t positive_count(const json& v, const std::string& ptr) {
    if (!v.is_number_integer() || v.get<long long>() <= 0) throw ConfigError(ptr, "expected a positive integer");
    return v.get<std::size_t>();
}

}  // namespace

FrameConfig parse_frame_config(const json& doc, const std::filesystem::path& base_dir) {
    if (!doc.is_object()) throw ConfigError("", "frame config must be a JSON object");
    FrameConfig cfg;
    cfg.name = doc.contains("name") ? text(doc["name"], "/name") : std::string("frame");
    cfg.provenance = doc.contains("provenance") ? text(doc["provenance"], "/provenance") : std::string();

    const json& material = require(doc, "material", "");
    cfg.model.elastic_modulus = positive(require(material, "elastic_modulus", "/material"), "/material/elastic_modulus");
    cfg.model.yield_stress = positive(require(material, "yield_stress", "/material"), "/material/yield_stress");
    cfg.model.density = positive(require(material, "density", "/material"), "/material/density");

    if (auto it = doc.find("analysis"); it != doc.end()) {
        if (auto so = it->find("second_order"); so != it->end()) {
            if (!so->is_boolean()) throw ConfigError("/analysis/second_order", "expected a boolean");
            if (so->get<bool>())
                throw ConfigError("/analysis/second_order", "second-order analysis is not supported yet");
        }
    }

    std::map<std::string, std::shared_ptr<const SectionPool>> pools;
    const json& pool_doc = require(doc, "pools", "");
    if (!pool_doc.is_object() || pool_doc.empty()) throw ConfigError("/pools", "expected a non-empty object");
    for (auto it = pool_doc.begin(); it != pool_doc.end(); ++it) {
        const std::string ptr = at("/pools", it.key());
        const std::filesystem::path file = base_dir / text(it.value(), ptr);
        std::ifstream in(file);
        if (!in) throw ConfigError(ptr, "cannot open section table " + file.string());
        try {
            pools[it.key()] = std::make_shared<const SectionPool>(load_section_table(in, it.key()));
        } catch (const SectionError& e) {
            throw ConfigError(ptr, e.what());
        }
    }

    const json& groups = array(require(doc, "groups", ""), "/groups");
    if (groups.empty()) throw ConfigError("/groups", "at least one group is required");
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const std::string ptr = at("/groups", g);
        const json& grp = groups[g];
        cfg.group_names.push_back(grp.contains("name") ? text(grp["name"], at(ptr, "name")) : "G" + std::to_string(g));
        const std::string role = text(require(grp, "role", ptr), at(ptr, "role"));
        if (role == "beam")
            cfg.model.group_roles.push_back(MemberRole::beam);
        else if (role == "column")
            cfg.model.group_roles.push_back(MemberRole::column);
        else
            throw ConfigError(at(ptr, "role"), "expected 'beam' or 'column'");
        const std::string pool = text(require(grp, "pool", ptr), at(ptr, "pool"));
        auto p = pools.find(pool);
        if (p == pools.end()) throw ConfigError(at(ptr, "pool"), "unknown pool '" + pool + "'");
        cfg.group_pools.push_back(p->second);
        cfg.constraints.group_k.push_back(grp.contains("k") ? positive(grp["k"], at(ptr, "k")) : 1.0);
    }
    const std::size_t ng = groups.size();

    const json& nodes = array(require(doc, "nodes", ""), "/nodes");
    if (nodes.empty()) throw ConfigError("/nodes", "at least one node is required");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const std::string ptr = at("/nodes", i);
        if (!nodes[i].is_array() || nodes[i].size() != 2) throw ConfigError(ptr, "expected [x, y]");
        cfg.model.nodes.push_back({number(nodes[i][0], at(ptr, 0)), number(nodes[i][1], at(ptr, 1))});
    }
    const std::size_t nn = nodes.size();

    const json& members = array(require(doc, "members", ""), "/members");
    if (members.empty()) throw ConfigError("/members", "at least one member is required");
    for (std::size_t i = 0; i < members.size(); ++i) {
        const std::string ptr = at("/members", i);
        if (!members[i].is_array() || members[i].size() != 3) throw ConfigError(ptr, "expected [node_a, node_b, group]");
        Member m;
        m.node_a = index(members[i][0], at(ptr, 0), nn, "node");
        m.node_b = index(members[i][1], at(ptr, 1), nn, "node");
        m.group = index(members[i][2], at(ptr, 2), ng, "group");
        if (m.node_a == m.node_b) throw ConfigError(ptr, "member connects a node to itself");
        cfg.model.members.push_back(m);
    }

    const json& supports = array(require(doc, "supports", ""), "/supports");
    for (std::size_t i = 0; i < supports.size(); ++i) {
        const std::string ptr = at("/supports", i);
        Support s;
        s.node = index(require(supports[i], "node", ptr), at(ptr, "node"), nn, "node");
        const json& fix = array(require(supports[i], "fix", ptr), at(ptr, "fix"));
        for (std::size_t k = 0; k < fix.size(); ++k) {
            const std::string dof = text(fix[k], at(at(ptr, "fix"), k));
            if (dof == "ux")
                s.ux = true;
            else if (dof == "uy")
                s.uy = true;
            else if (dof == "rot")
                s.rot = true;
            else
                throw ConfigError(at(at(ptr, "fix"), k), "expected one of ux, uy, rot");
        }
        cfg.model.supports.push_back(s);
    }

    if (auto it = doc.find("loads"); it != doc.end()) {
        const json& loads = array(*it, "/loads");
        for (std::size_t i = 0; i < loads.size(); ++i) {
            const std::string ptr = at("/loads", i);
            NodalLoad l;
            l.node = index(require(loads[i], "node", ptr), at(ptr, "node"), nn, "node");
            if (loads[i].contains("fx")) l.fx = number(loads[i]["fx"], at(ptr, "fx"));
            if (loads[i].contains("fy")) l.fy = number(loads[i]["fy"], at(ptr, "fy"));
            if (loads[i].contains("m")) l.moment = number(loads[i]["m"], at(ptr, "m"));
            cfg.model.loads.push_back(l);
        }
    }
    if (auto it = doc.find("member_loads"); it != doc.end()) {
        const json& loads = array(*it, "/member_loads");
        for (std::size_t i = 0; i < loads.size(); ++i) {
            const std::string ptr = at("/member_loads", i);
            MemberLoad l;
            l.member = index(require(loads[i], "member", ptr), at(ptr, "member"), cfg.model.members.size(), "member");
            l.transverse = number(require(loads[i], "w", ptr), at(ptr, "w"));
            cfg.model.member_loads.push_back(l);
        }
    }

    const json& levels = array(require(doc, "story_levels", ""), "/story_levels");
    for (std::size_t i = 0; i < levels.size(); ++i) cfg.model.story_levels.push_back(number(levels[i], at("/story_levels", i)));

    try {
        cfg.model.validate();
    } catch (const ModelError& e) {
        throw ConfigError("", e.what());
    }

    const json& cons = require(doc, "constraints", "");
    if (!cons.is_object()) throw ConfigError("/constraints", "expected an object");
    cfg.constraints.stress_allowable = optional_positive(cons, "stress_allowable", "/constraints");
    cfg.constraints.drift_index = optional_positive(cons, "drift_index", "/constraints");
    cfg.constraints.roof_drift_limit = optional_positive(cons, "roof_drift_limit", "/constraints");
    cfg.constraints.interstory_index = optional_positive(cons, "interstory_index", "/constraints");
    if (auto it = cons.find("lrfd"); it != cons.end()) {
        if (!it->is_boolean()) throw ConfigError("/constraints/lrfd", "expected a boolean");
        cfg.constraints.lrfd = it->get<bool>();
    }
    if (auto it = cons.find("k_policy"); it != cons.end()) {
        const std::string k = text(*it, "/constraints/k_policy");
        if (k == "fixed")
            cfg.constraints.k_policy = KPolicy::fixed;
        else if (k == "sway")
            cfg.constraints.k_policy = KPolicy::sway;
        else
            throw ConfigError("/constraints/k_policy", "expected 'fixed' or 'sway'");
    }
    try {
        cfg.constraints.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("/constraints", e.what());
    }

    if (auto it = doc.find("functioning"); it != doc.end()) {
        const json& rules = array(*it, "/functioning");
        for (std::size_t r = 0; r < rules.size(); ++r) {
            const std::string ptr = at("/functioning", r);
            FunctioningRule rule;
            const json& ids = array(require(rules[r], "group_ids", ptr), at(ptr, "group_ids"));
            for (std::size_t k = 0; k < ids.size(); ++k)
                rule.replaced_variable_ids.push_back(index(ids[k], at(at(ptr, "group_ids"), k), ng, "group"));
            const json& hs = array(require(rules[r], "heights_cm", ptr), at(ptr, "heights_cm"));
            for (std::size_t k = 0; k < hs.size(); ++k) rule.heights.push_back(number(hs[k], at(at(ptr, "heights_cm"), k)));
            try {
                rule.validate();
            } catch (const FunctioningError& e) {
                throw ConfigError(ptr, e.what());
            }
            for (std::size_t id : rule.replaced_variable_ids) {
                if (cfg.group_pools[id] != cfg.group_pools[rule.replaced_variable_ids.front()])
                    throw ConfigError(at(ptr, "group_ids"), "all groups of a rule must share one section pool");
            }
            cfg.functioning.push_back(std::move(rule));
        }
        try {
            validate_rules(cfg.functioning, ng);
        } catch (const FunctioningError& e) {
            throw ConfigError("/functioning", e.what());
        }
        for (std::size_t r = 0; r < cfg.functioning.size(); ++r) {
            const auto& rule = cfg.functioning[r];
            std::string name = rules[r].contains("name") ? text(rules[r]["name"], at(at("/functioning", r), "name"))
                                                          : "stack" + std::to_string(r);
            cfg.column_stacks.push_back({name, rule.replaced_variable_ids, rule.heights});
        }
    }

    if (auto it = doc.find("experiment"); it != doc.end()) {
        StrategyBudgets b;
        const json& pop = require(*it, "population", "/experiment");
        const json& fe = require(*it, "max_fe", "/experiment");
        for (Strategy s : kAllStrategies) {
            const std::string key(to_string(s));
            b[s].population = positive_count(require(pop, key, "/experiment/population"), "/experiment/population/" + key);
            b[s].max_fe = positive_count(require(fe, key, "/experiment/max_fe"), "/experiment/max_fe/" + key);
        }
        cfg.budgets = b;
    }
    return cfg;
}

FrameConfig load_frame_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot open frame config " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("invalid JSON in ") + path.string() + ": " + e.what());
    }
    return parse_frame_config(doc, path.parent_path());
}

}  // namespace framefx
