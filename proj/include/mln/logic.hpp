#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "mln/kb.hpp"
#include "mln/rng.hpp"

namespace mln {

// A literal argument: clause-local variable or entity constant.
struct Term {
    bool is_var = true;
    uint32_t index = 0;  // variable index into Clause::var_names, or EntityId

    static Term var(uint32_t v) { return Term{true, v}; }
    static Term constant(EntityId e) { return Term{false, e}; }
    bool operator==(const Term& o) const { return is_var == o.is_var && index == o.index; }
};

struct Literal {
    PredicateId pred = 0;
    bool negated = false;
    std::vector<Term> args;

    bool operator==(const Literal& o) const {
        return pred == o.pred && negated == o.negated && args == o.args;
    }
};

// Weighted disjunction of literals; the canonical rule form. Implications
// are rewritten to this form at parse time.
struct Clause {
    std::vector<Literal> literals;
    std::vector<std::string> var_names;  // indexed by Term::index for variables
    int weight_slot = -1;                // index into MLNModel::weights once registered

    size_t num_vars() const { return var_names.size(); }
    bool operator==(const Clause& o) const {
        return literals == o.literals && var_names == o.var_names;
    }
};

// A clause with every variable bound to an entity.
struct GroundClause {
    const Clause* clause = nullptr;
    std::vector<EntityId> binding;   // indexed by variable index
    std::vector<GroundAtom> atoms;   // one per literal

    bool operator==(const GroundClause& o) const {
        return clause == o.clause && binding == o.binding;
    }
};

// Rule text in the ASCII grammar:
//   rule    := disjunction | conjunction "=>" disjunction
//   literal := ["!"] ident "(" term ("," term)* ")"
//   term    := Variable | "quoted constant" | lowercase_constant
// Tokens starting with an uppercase letter are variables; quoted strings or
// lowercase identifiers name entities. Predicates must be registered in kb.
Clause parse_clause(const std::string& text, const KnowledgeBase& kb, int line = 0);

std::string clause_to_string(const Clause& clause, const KnowledgeBase& kb);

GroundClause ground(const Clause& clause, const std::vector<EntityId>& binding);
GroundClause ground(const Clause& clause, const std::unordered_map<std::string, EntityId>& binding);

// Truth value of the ground clause in a fully specified world.
// Throws if the world is missing one of the clause's atoms.
bool evaluate(const GroundClause& gc, const std::unordered_map<uint64_t, bool>& world);

// (literal index, atom) entries whose truth is Unknown in kb, in literal order.
std::vector<std::pair<int, GroundAtom>> latent_literals(const GroundClause& gc, const KnowledgeBase& kb);

enum class GroundingStrategy { Uniform, Anchored };

// Uniform: every variable bound i.i.d. uniformly over entities.
// Anchored: one literal is bound through a uniformly chosen observed-or-query
// atom of its predicate, the remaining variables uniformly; falls back to
// Uniform when no literal has a matching atom.
GroundClause sample_grounding(const Clause& clause, const KnowledgeBase& kb, GroundingStrategy strategy,
                              Rng& rng);

// All M^num_vars groundings in lexicographic binding order.
// Throws when the count exceeds cap.
std::vector<GroundClause> enumerate_groundings(const Clause& clause, const KnowledgeBase& kb, size_t cap);

// rules.txt: one rule per line, "weight<TAB>rule-text"; '#' comments.
struct ParsedRule {
    double weight;
    Clause clause;
    std::string text;  // original rule text (without the weight column)
};
std::vector<ParsedRule> load_rules(std::istream& in, const KnowledgeBase& kb, const std::string& filename = "");

}  // namespace mln
