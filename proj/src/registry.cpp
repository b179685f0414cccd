#include "fiblab/registry.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace fiblab::registry {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) { out.push_back(cur); cur.clear(); }
        else cur += c;
    }
    out.push_back(cur);
    return out;
}

long long parse_int(const std::string& s, const std::string& where) {
    try {
        size_t pos = 0;
        long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw ParseError(where + ": expected integer, got '" + s + "'");
    }
}

std::string params_to_string(const std::map<std::string, long long>& params) {
    if (params.empty()) return "-";
    std::string s;
    for (const auto& [k, v] : params) {
        if (!s.empty()) s += ",";
        s += k + "=" + std::to_string(v);
    }
    return s;
}

}  // namespace

long long GroupCitation::param(const std::string& name) const {
    auto it = params.find(name);
    if (it == params.end())
        throw UnknownKey("record '" + key + "' has no param '" + name + "'");
    return it->second;
}

bool GroupCitation::has_param(const std::string& name) const {
    return params.count(name) != 0;
}

Registry Registry::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("registry: cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path);
}

Registry Registry::parse(const std::string& text, const std::string& origin) {
    Registry reg;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::string where = origin + ":" + std::to_string(lineno);
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        std::vector<std::string> fields = split(line, '|');
        if (fields.size() != 6)
            throw ParseError(where + ": expected 6 '|'-separated fields, got " +
                             std::to_string(fields.size()));
        GroupCitation rec;
        rec.key = trim(fields[0]);
        if (rec.key.empty()) throw ParseError(where + ": empty key");

        std::string params_field = trim(fields[1]);
        if (params_field != "-") {
            for (const std::string& piece : split(params_field, ',')) {
                std::vector<std::string> kv = split(trim(piece), '=');
                if (kv.size() != 2 || trim(kv[0]).empty())
                    throw ParseError(where + ": bad param '" + piece + "' (want name=int)");
                std::string name = trim(kv[0]);
                if (rec.params.count(name))
                    throw ParseError(where + ": duplicate param '" + name + "'");
                rec.params[name] = parse_int(trim(kv[1]), where);
            }
        }

        long long free_rank = parse_int(trim(fields[2]), where);
        if (free_rank < 0) throw ParseError(where + ": negative free rank");

        std::vector<long long> orders;
        std::string torsion_field = trim(fields[3]);
        if (torsion_field != "-") {
            for (const std::string& piece : split(torsion_field, ',')) {
                long long d = parse_int(trim(piece), where);
                if (d < 2) throw ParseError(where + ": torsion order '" +
                                            std::to_string(d) + "' must be >= 2");
                orders.push_back(d);
            }
        }
        rec.group = fgab::AbGroup::from_cyclic_summands(orders, free_rank);

        std::string labels_field = trim(fields[4]);
        if (labels_field != "-")
            for (const std::string& piece : split(labels_field, ';')) {
                std::string label = trim(piece);
                if (!label.empty()) rec.generator_labels.push_back(label);
            }

        rec.source = trim(fields[5]);
        if (rec.source.empty()) throw ParseError(where + ": record '" + rec.key +
                                                 "' has empty source citation");

        for (const GroupCitation& prev : reg.records_)
            if (prev.key == rec.key && prev.params == rec.params)
                throw ParseError(where + ": duplicate record '" + rec.key + "' params " +
                                 params_to_string(rec.params));
        reg.records_.push_back(std::move(rec));
    }
    return reg;
}

namespace {

// A query matches a record when every query param appears in the record with
// the same value; records may carry extra payload params (value=, epi=, ...).
bool params_match(const std::map<std::string, long long>& record_params,
                  const std::map<std::string, long long>& query) {
    for (const auto& [name, v] : query) {
        auto it = record_params.find(name);
        if (it == record_params.end() || it->second != v) return false;
    }
    return true;
}

}  // namespace

GroupCitation Registry::lookup(const std::string& key,
                               const std::map<std::string, long long>& params) const {
    if (key == "i_*(K)") {
        auto k = params.find("k");
        auto n = params.find("n");
        if (k == params.end() || n == params.end())
            throw UnknownKey("lookup 'i_*(K)' needs params k and n");
        return attaching_kernel_image(k->second, n->second);
    }
    const GroupCitation* found = nullptr;
    for (const GroupCitation& rec : records_) {
        if (rec.key != key || !params_match(rec.params, params)) continue;
        if (found)
            throw InvalidArgument("registry: lookup '" + key + "' params " +
                                  params_to_string(params) + " is ambiguous");
        found = &rec;
    }
    if (!found)
        throw UnknownKey("registry: no record '" + key + "' with params " +
                         params_to_string(params));
    return *found;
}

bool Registry::has(const std::string& key,
                   const std::map<std::string, long long>& params) const {
    if (key == "i_*(K)") return params.count("k") && params.count("n");
    for (const GroupCitation& rec : records_)
        if (rec.key == key && params_match(rec.params, params)) return true;
    return false;
}

fgab::AbGroup attaching_kernel_image_group(long long k, long long n) {
    if (k < 2) throw InvalidArgument("attaching_kernel_image: k must be >= 2");
    if (n < 1) throw InvalidArgument("attaching_kernel_image: n must be >= 1");
    if (k == 2 || k == 4) return fgab::AbGroup::cyclic(n);
    if (n % 2 == 0) return fgab::AbGroup::cyclic(2 * n);
    return fgab::AbGroup::cyclic(n);
}

GroupCitation attaching_kernel_image(long long k, long long n) {
    GroupCitation rec;
    rec.key = "i_*(K)";
    rec.params = {{"k", k}, {"n", n}};
    rec.group = attaching_kernel_image_group(k, n);
    if (k == 2 || k == 4 || n % 2 == 0)
        rec.generator_labels = {"[X_{2k}, iota_{2k-1}]_r"};
    else
        rec.generator_labels = {"2[X_{2k}, iota_{2k-1}]_r"};
    rec.source = "image of the attaching-kernel under the fiber inclusion; case split on k "
                 "and the parity of n";
    return rec;
}

long long coefficient_modulus(long long k, long long n) {
    if (k < 2) throw InvalidArgument("coefficient_modulus: k must be >= 2");
    if (n < 1) throw InvalidArgument("coefficient_modulus: n must be >= 1");
    return (k == 2 || k == 4) ? n : 2 * n;
}

long long hopf_image_stride(long long k) {
    if (k < 2) throw InvalidArgument("hopf_image_stride: k must be >= 2");
    return (k == 2 || k == 4) ? 1 : 2;
}

}  // namespace fiblab::registry
