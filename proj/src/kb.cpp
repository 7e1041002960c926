#include "mln/kb.hpp"

#include <algorithm>
#include <istream>
#include <sstream>
#include <tuple>

namespace mln {

EntityId KnowledgeBase::add_entity(const std::string& name) {
    if (entity_ids.count(name)) throw error("duplicate entity name: " + name);
    if (entity_names.size() >= 0xFFFFu) throw error("entity table full (max 65534)");
    EntityId id = static_cast<EntityId>(entity_names.size());
    entity_names.push_back(name);
    entity_ids.emplace(name, id);
    return id;
}

EntityId KnowledgeBase::entity(const std::string& name) const {
    auto it = entity_ids.find(name);
    if (it == entity_ids.end()) throw error("unknown entity: " + name);
    return it->second;
}

PredicateId KnowledgeBase::add_predicate(const std::string& name, int arity) {
    if (predicate_ids.count(name)) throw error("duplicate predicate name: " + name);
    if (arity < 1 || arity > kMaxArity)
        throw error("predicate " + name + ": arity " + std::to_string(arity) + " out of range [1," +
                    std::to_string(kMaxArity) + "]");
    PredicateId id = static_cast<PredicateId>(predicates.size());
    predicates.push_back(PredicateSchema{name, arity});
    predicate_ids.emplace(name, id);
    return id;
}

PredicateId KnowledgeBase::predicate(const std::string& name) const {
    auto it = predicate_ids.find(name);
    if (it == predicate_ids.end()) throw error("unknown predicate: " + name);
    return it->second;
}

void KnowledgeBase::check_atom(const GroundAtom& atom) const {
    if (atom.pred >= predicates.size()) throw error("atom references unknown predicate id");
    const PredicateSchema& s = predicates[atom.pred];
    if (atom.arity != s.arity)
        throw error("atom " + s.name + ": got " + std::to_string(atom.arity) + " args, arity is " +
                    std::to_string(s.arity));
    for (int i = 0; i < atom.arity; ++i)
        if (atom.args[static_cast<size_t>(i)] >= entity_names.size())
            throw error("atom " + s.name + ": unknown entity id in argument " + std::to_string(i));
}

void KnowledgeBase::assert_fact(const GroundAtom& atom, bool value) {
    check_atom(atom);
    if (is_query(atom)) throw error("cannot assert fact over query atom " + atom_to_string(atom));
    auto it = fact_index.find(atom.key());
    if (it != fact_index.end()) {
        if (facts[it->second].second != value)
            throw error("conflicting re-assertion of " + atom_to_string(atom));
        return;  // idempotent
    }
    fact_index.emplace(atom.key(), static_cast<uint32_t>(facts.size()));
    facts.emplace_back(atom, value);
}

TruthValue KnowledgeBase::truth_of(const GroundAtom& atom) const {
    check_atom(atom);
    auto it = fact_index.find(atom.key());
    if (it != fact_index.end()) return facts[it->second].second ? TruthValue::True : TruthValue::False;
    if (world_mode == WorldMode::Closed && query_predicates.count(atom.pred) == 0) return TruthValue::False;
    return TruthValue::Unknown;
}

void KnowledgeBase::add_split_atom(Split s, const GroundAtom& atom) {
    check_atom(atom);
    auto it = split_index.find(atom.key());
    if (it != split_index.end()) return;  // earlier split wins
    query_predicates.insert(atom.pred);
    split_atoms[static_cast<int>(s)].push_back(atom);
    split_index.emplace(atom.key(), s);
}

std::string KnowledgeBase::atom_to_string(const GroundAtom& atom) const {
    std::string out = predicates.at(atom.pred).name;
    out += '(';
    for (int i = 0; i < atom.arity; ++i) {
        if (i) out += ',';
        out += entity_names.at(atom.args[static_cast<size_t>(i)]);
    }
    out += ')';
    return out;
}

std::vector<GroundAtom> KnowledgeBase::query_universe(size_t cap) const {
    std::vector<PredicateId> preds(query_predicates.begin(), query_predicates.end());
    std::sort(preds.begin(), preds.end());
    size_t m = num_entities();
    size_t total = 0;
    for (PredicateId p : preds) {
        size_t n = 1;
        for (int i = 0; i < predicates[p].arity; ++i) n *= m;
        total += n;
    }
    if (total > cap)
        throw error("query universe has " + std::to_string(total) + " atoms, cap is " + std::to_string(cap));
    std::vector<GroundAtom> out;
    out.reserve(total);
    for (PredicateId p : preds) {
        int arity = predicates[p].arity;
        std::vector<EntityId> args(static_cast<size_t>(arity), 0);
        while (true) {
            GroundAtom a(p, args);
            if (!is_observed(a)) out.push_back(a);
            int pos = arity - 1;
            while (pos >= 0 && ++args[static_cast<size_t>(pos)] == m) args[static_cast<size_t>(pos--)] = 0;
            if (pos < 0) break;
        }
    }
    return out;
}

FactorGraph build_factor_graph(const KnowledgeBase& kb) {
    FactorGraph g;
    g.num_entities = kb.num_entities();
    g.num_facts = kb.facts.size();
    g.incident.resize(g.num_entities);
    for (uint32_t f = 0; f < kb.facts.size(); ++f) {
        const auto& [atom, value] = kb.facts[f];
        for (int i = 0; i < atom.arity; ++i) {
            EntityId c = atom.args[static_cast<size_t>(i)];
            g.edges.push_back(FactorGraph::Edge{c, f, i});
            g.incident[c].push_back(FactorGraph::Incidence{f, i, value});
        }
    }
    return g;
}

std::vector<std::tuple<GroundAtom, int, bool>> neighbors(const FactorGraph& g, const KnowledgeBase& kb,
                                                         EntityId c) {
    if (c >= g.incident.size()) throw error("neighbors: entity not in graph");
    std::vector<std::tuple<GroundAtom, int, bool>> out;
    out.reserve(g.incident[c].size());
    for (const auto& inc : g.incident[c])
        out.emplace_back(kb.facts[inc.fact].first, inc.position, inc.value);
    return out;
}

namespace {

void skip_ws(const std::string& s, size_t& i) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
}

bool ident_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
           c == '-' || c == '.';
}

std::string read_ident(const std::string& s, size_t& i, int line) {
    size_t start = i;
    while (i < s.size() && ident_char(s[i])) ++i;
    if (i == start) throw parse_error("expected identifier", line, static_cast<int>(start + 1));
    return s.substr(start, i - start);
}

}  // namespace

GroundAtom parse_atom_text(KnowledgeBase& kb, const std::string& text, int line, bool allow_new_predicates) {
    size_t i = 0;
    skip_ws(text, i);
    std::string pred_name = read_ident(text, i, line);
    skip_ws(text, i);
    if (i >= text.size() || text[i] != '(')
        throw parse_error("expected '(' after predicate name", line, static_cast<int>(i + 1));
    ++i;
    std::vector<EntityId> args;
    while (true) {
        skip_ws(text, i);
        std::string ent = read_ident(text, i, line);
        auto it = kb.entity_ids.find(ent);
        args.push_back(it != kb.entity_ids.end() ? it->second : kb.add_entity(ent));
        skip_ws(text, i);
        if (i < text.size() && text[i] == ',') {
            ++i;
            continue;
        }
        if (i < text.size() && text[i] == ')') {
            ++i;
            break;
        }
        throw parse_error("expected ',' or ')'", line, static_cast<int>(i + 1));
    }
    skip_ws(text, i);
    if (i != text.size()) throw parse_error("trailing characters after atom", line, static_cast<int>(i + 1));
    if (args.size() > static_cast<size_t>(kMaxArity))
        throw parse_error("atom has more than " + std::to_string(kMaxArity) + " arguments", line, 1);

    PredicateId pid;
    auto it = kb.predicate_ids.find(pred_name);
    if (it != kb.predicate_ids.end()) {
        pid = it->second;
        if (kb.predicates[pid].arity != static_cast<int>(args.size()))
            throw parse_error("predicate " + pred_name + " used with " + std::to_string(args.size()) +
                                  " args, arity is " + std::to_string(kb.predicates[pid].arity),
                              line, 1);
    } else {
        if (!allow_new_predicates) throw parse_error("unknown predicate " + pred_name, line, 1);
        pid = kb.add_predicate(pred_name, static_cast<int>(args.size()));
    }
    return GroundAtom(pid, args);
}

namespace {

// strips comments and whitespace; returns false for blank lines
bool clean_line(std::string& s) {
    size_t hash = s.find('#');
    if (hash != std::string::npos) s.erase(hash);
    while (!s.empty() && (s.back() == '\r' || s.back() == '\n' || s.back() == ' ' || s.back() == '\t'))
        s.pop_back();
    size_t start = 0;
    while (start < s.size() && (s[start] == ' ' || s[start] == '\t')) ++start;
    s.erase(0, start);
    return !s.empty();
}

}  // namespace

void load_fact_file(KnowledgeBase& kb, std::istream& in, const std::string& filename) {
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (!clean_line(raw)) continue;
        size_t tab = raw.find('\t');
        std::string value_part = tab == std::string::npos ? "" : raw.substr(0, tab);
        if (value_part != "0" && value_part != "1")
            throw parse_error(filename + ": expected line 'value<TAB>Pred(args)' with value in {0,1}", line, 1);
        GroundAtom atom = parse_atom_text(kb, raw.substr(tab + 1), line);
        kb.assert_fact(atom, value_part == "1");
    }
}

void load_atom_file(KnowledgeBase& kb, std::istream& in, Split split, const std::string& filename) {
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (!clean_line(raw)) continue;
        if (raw.find('\t') != std::string::npos)
            throw parse_error(filename + ": atom files carry no value column", line, 1);
        GroundAtom atom = parse_atom_text(kb, raw, line);
        if (kb.is_observed(atom)) continue;  // facts file wins over split duplicates
        kb.add_split_atom(split, atom);
    }
}

}  // namespace mln
