#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "dtse/anaphora.h"
#include "dtse/signature.h"
#include "dtse/term.h"

namespace dtse {

// One verb entry: the event predicate the verb contributes, plus the
// lexical quirks the grammar consults.
struct lexical_verb {
	std::string event_constant;
	bool transitive = false;
	// The patient doubles as the event's location (in(e, patient)).
	bool locative_patient = false;
	// With a reflexive object the verb denotes a two-place relation
	// between entities rather than an event description.
	std::string direct_constant;
};

struct lexical_name {
	std::string constant;
	// "female" or "male"; selects the property reflexives and pronouns
	// ascribe, with the matching fact constant from the signature.
	std::string gender;
};

// Closed word list of the controlled fragment. Every constant mentioned
// here is declared by fragment_signature (or by a signature the caller
// checks against lexicon_consistent).
struct lexicon {
	std::map<std::string, lexical_name> proper_names;
	std::map<std::string, lexical_verb> verbs;
	// Participle surfaces for the passive ("loved", "hit", "held").
	std::map<std::string, std::string> participles;
	std::map<std::string, std::string> adverbs;
	// Adjectives used after a copula, split by the sort they describe.
	std::map<std::string, std::string> event_adjectives;
	std::map<std::string, std::string> entity_adjectives;
	// Nouns for definite descriptions mapping to fixed constants.
	std::map<std::string, std::string> definite_nouns;
	// Nouns for indefinites mapping to one-place predicates.
	std::map<std::string, std::string> indefinite_nouns;
	// Nouns a possessive can introduce, as (predicate) entries.
	std::map<std::string, std::string> possessable_nouns;
	std::map<std::string, std::string> prepositions;
	// Multi-word time modifiers contributing at(e, constant).
	std::map<std::string, std::string> time_modifiers;

	// The fixed anaphoric VP and referent triggers of the grammar.
	static const std::set<std::string>& anaphor_triggers();
};

// The built-in word list covering the worked discourses.
lexicon builtin_lexicon();

class lexicon_error : public std::runtime_error {
public:
	lexicon_error(const std::string& message, std::size_t line)
	    : std::runtime_error("lexicon line " + std::to_string(line) +
	                         ": " + message),
	      line(line) {}

	std::size_t line;
};

// Parses the plain-text lexicon table: one entry per line,
// `surface | category | constant [| flag…]`, `#` comments. Categories:
// name (flags: female/male), verb (flags: transitive, locative-patient,
// direct=REL), participle, adverb, adjective-event, adjective-entity,
// noun-definite, noun-indefinite, noun-possessable, preposition, time.
// Entries extend (and may override) the built-in word list.
lexicon parse_lexicon(const std::string& text);

// Declares every constant `lex` mentions that `sig` lacks, with the type
// its category implies (names as entities with their gender facts, verbs
// as event predicates, and so on).
void extend_signature(global_signature& sig, const lexicon& lex);

// Declares every constant of the built-in lexicon, the structural
// relation constants, and the gender facts over the shared calculus
// signature.
global_signature fragment_signature();

// Names missing from `sig` that `lex` refers to; empty means consistent.
std::vector<std::string> lexicon_missing(const lexicon& lex,
                                         const global_signature& sig);

class unknown_word : public std::runtime_error {
public:
	explicit unknown_word(const std::string& word)
	    : std::runtime_error("unknown word: " + word), word(word) {}

	std::string word;
};

class unsupported_construction : public std::runtime_error {
public:
	explicit unsupported_construction(const std::string& message)
	    : std::runtime_error(message) {}
};

// A parsed noun phrase. `noun` holds the surface noun or name;
// possessives remember that the owner is the clause's subject.
struct noun_phrase {
	enum class form {
		proper,
		definite,     // "the" noun
		indefinite,   // "a" noun
		possessed,    // "his"/"her" noun
		reflexive,    // "herself"/"himself"
		demonstrative // "this"
	};
	form kind = form::proper;
	std::string noun;
};

// One parsed sentence of the fragment.
struct sentence_tree {
	std::optional<noun_phrase> subject;
	// Pronoun subjects ("he"/"she") carry the ascribed gender instead.
	std::optional<std::string> subject_pronoun_gender;
	// Subject built from the fixed "what happened in X" construction.
	std::optional<std::string> happened_in;

	std::string verb;
	bool anaphoric = false;
	voice_kind voice = voice_kind::active;
	bool negated = false;
	std::optional<noun_phrase> object;
	// By-phrase agent of a passive clause.
	std::optional<noun_phrase> by_agent;
	std::vector<std::string> adverbs;
	std::vector<std::pair<std::string, noun_phrase>> prepositional;
	std::vector<std::string> time_modifiers;
	// Copular "is ADJ" predicate, if any.
	std::optional<std::string> adjective;
	// Trailing "before Y did" clause: the second clause's subject.
	std::optional<noun_phrase> before_subject;
};

// Deterministic parse of one sentence. Throws unknown_word for words
// outside the lexicon and unsupported_construction for shapes outside
// the grammar.
sentence_tree parse_sentence(const lexicon& lex, const std::string& text);

// A dynamic proposition: a function from a context proof to a type.
struct dynamic_prop {
	term_ref term;
};

// Allocator for anaphora-site indices and their resolution hints, shared
// across the sentences of one discourse.
struct anaphor_state {
	std::size_t next_index = 1;
	std::map<std::size_t, resolution_hints> hints;
};

// Builds the sentence's dynamic proposition. Anaphora sites draw their
// indices from `state`, which also records the voice hint per site.
dynamic_prop interpret_sentence(const lexicon& lex,
                                const sentence_tree& tree,
                                anaphor_state& state);

// Dynamic conjunction: folds the propositions left to right with
// merge(d1, d2) = λc. Σ u: d1(c). d2((c, u)), so each sentence is pushed
// onto the left context of its successors. Throws
// unsupported_construction on an empty list.
dynamic_prop sequence_discourse(const std::vector<dynamic_prop>& props);

// A fully assembled discourse: the sequenced proposition, the site
// hints, and the sentences it came from.
struct discourse {
	dynamic_prop prop;
	std::map<std::size_t, resolution_hints> hints;
	std::vector<std::string> sentences;
};

// Splits discourse text into sentences (one per line; `#` comments and
// blank lines skipped), parses, interprets and sequences them.
discourse build_discourse(const lexicon& lex, const std::string& text);

} // namespace dtse
