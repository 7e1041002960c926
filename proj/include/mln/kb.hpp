#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace mln {

class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parse failure with file position, used by the fact/rule readers.
class parse_error : public error {
public:
    parse_error(const std::string& msg, int line, int col)
        : error(msg + " at line " + std::to_string(line) + ", column " + std::to_string(col)),
          line(line), col(col) {}
    int line;
    int col;
};

using EntityId = uint32_t;
using PredicateId = uint32_t;

constexpr int kMaxArity = 3;

struct PredicateSchema {
    std::string name;
    int arity = 0;  // in [1, kMaxArity]
};

enum class TruthValue { False = 0, True = 1, Unknown = 2 };

enum class WorldMode { Open, Closed };

// A predicate applied to concrete entities. Argument order is significant.
struct GroundAtom {
    PredicateId pred = 0;
    std::array<EntityId, kMaxArity> args{};
    int arity = 0;

    GroundAtom() = default;
    GroundAtom(PredicateId p, std::initializer_list<EntityId> a) : pred(p), arity(static_cast<int>(a.size())) {
        int i = 0;
        for (EntityId e : a) args[static_cast<size_t>(i++)] = e;
    }
    GroundAtom(PredicateId p, const std::vector<EntityId>& a) : pred(p), arity(static_cast<int>(a.size())) {
        for (size_t i = 0; i < a.size(); ++i) args[i] = a[i];
    }

    // Dense key: 16 bits per field. Entity and predicate ids must stay below 2^16.
    uint64_t key() const {
        uint64_t k = static_cast<uint64_t>(pred);
        for (int i = 0; i < kMaxArity; ++i) k = (k << 16) | (i < arity ? args[static_cast<size_t>(i)] : 0xFFFFu);
        return k;
    }
    bool operator==(const GroundAtom& o) const { return pred == o.pred && arity == o.arity && args == o.args; }
    bool operator!=(const GroundAtom& o) const { return !(*this == o); }
    bool operator<(const GroundAtom& o) const { return key() < o.key(); }
};

struct AtomHash {
    size_t operator()(const GroundAtom& a) const {
        uint64_t k = a.key();
        k ^= k >> 33;
        k *= 0xff51afd7ed558ccdULL;
        k ^= k >> 33;
        return static_cast<size_t>(k);
    }
};

enum class Split { Train = 0, Valid = 1, Test = 2 };

struct KnowledgeBase {
    std::vector<std::string> entity_names;
    std::unordered_map<std::string, EntityId> entity_ids;

    std::vector<PredicateSchema> predicates;
    std::unordered_map<std::string, PredicateId> predicate_ids;

    // observed facts in insertion order (the fact-node order of the factor graph)
    std::vector<std::pair<GroundAtom, bool>> facts;
    std::unordered_map<uint64_t, uint32_t> fact_index;  // atom key -> facts index

    // query predicates: their unobserved groundings form the query set
    std::unordered_set<PredicateId> query_predicates;
    // split members are known-true atoms used for supervision/evaluation labels
    std::vector<GroundAtom> split_atoms[3];
    std::unordered_map<uint64_t, Split> split_index;

    WorldMode world_mode = WorldMode::Open;

    size_t num_entities() const { return entity_names.size(); }

    EntityId add_entity(const std::string& name);
    EntityId entity(const std::string& name) const;  // throws if unknown
    PredicateId add_predicate(const std::string& name, int arity);
    PredicateId predicate(const std::string& name) const;  // throws if unknown
    const PredicateSchema& schema(PredicateId p) const { return predicates.at(p); }

    void check_atom(const GroundAtom& atom) const;  // arity/id validation

    // Observed-fact map update. Re-asserting the same value is a no-op;
    // a conflicting value is an error.
    void assert_fact(const GroundAtom& atom, bool value);

    bool is_observed(const GroundAtom& atom) const { return fact_index.count(atom.key()) != 0; }
    // True when the atom belongs to the query set: a query predicate's
    // grounding that is not observed as a fact.
    bool is_query(const GroundAtom& atom) const {
        return query_predicates.count(atom.pred) != 0 && !is_observed(atom);
    }

    TruthValue truth_of(const GroundAtom& atom) const;

    void add_split_atom(Split s, const GroundAtom& atom);
    bool in_split(const GroundAtom& atom, Split s) const {
        auto it = split_index.find(atom.key());
        return it != split_index.end() && it->second == s;
    }
    bool in_any_split(const GroundAtom& atom) const { return split_index.count(atom.key()) != 0; }

    std::string atom_to_string(const GroundAtom& atom) const;

    // All unobserved groundings of the query predicates, in (predicate,
    // lexicographic-args) order. Throws if the universe exceeds `cap`.
    std::vector<GroundAtom> query_universe(size_t cap = 1u << 20) const;
};

// Bipartite entity/fact graph. Fact nodes follow kb.facts order; an edge
// (entity, fact, position) exists per argument slot the entity occupies.
struct FactorGraph {
    struct Edge {
        EntityId entity;
        uint32_t fact;  // index into kb.facts
        int position;
    };
    struct Incidence {
        uint32_t fact;
        int position;
        bool value;
    };
    size_t num_entities = 0;
    size_t num_facts = 0;
    std::vector<Edge> edges;
    std::vector<std::vector<Incidence>> incident;  // per entity, edge insertion order
};

FactorGraph build_factor_graph(const KnowledgeBase& kb);

// Incident facts of entity c with edge position and observed value.
std::vector<std::tuple<GroundAtom, int, bool>> neighbors(const FactorGraph& g, const KnowledgeBase& kb,
                                                         EntityId c);

// --- text formats -----------------------------------------------------------
//
// Fact file: one fact per line, "value<TAB>Pred(arg1,...)" with value in {0,1}.
// Atom file: one atom per line, "Pred(arg1,...)". '#' starts a comment.

// Parses "Pred(a,b,...)"; registers unseen entities, and unseen predicates
// when allow_new_predicates is set. `line` is used for error reporting.
GroundAtom parse_atom_text(KnowledgeBase& kb, const std::string& text, int line = 0,
                           bool allow_new_predicates = true);

void load_fact_file(KnowledgeBase& kb, std::istream& in, const std::string& filename = "");
void load_atom_file(KnowledgeBase& kb, std::istream& in, Split split, const std::string& filename = "");

}  // namespace mln
