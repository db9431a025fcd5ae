#include "dtse/fragment.h"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace dtse {

namespace {

std::string lower(const std::string& s) {
	std::string out = s;
	std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
		return static_cast<char>(std::tolower(c));
	});
	return out;
}

std::vector<std::string> tokenize(const std::string& text) {
	std::vector<std::string> out;
	std::istringstream in(text);
	std::string word;
	while (in >> word) {
		while (!word.empty() && (word.back() == '.' || word.back() == ',' ||
		                         word.back() == '!' || word.back() == '?')) {
			word.pop_back();
		}
		if (!word.empty()) {
			out.push_back(word);
		}
	}
	return out;
}

term_ref pred1(const std::string& name, const term_ref& x) {
	return mk_application(mk_const(name), x);
}

term_ref pred2(const std::string& name, const term_ref& x,
               const term_ref& y) {
	return mk_application(mk_application(mk_const(name), x), y);
}

term_ref right_nested(const std::vector<term_ref>& props) {
	if (props.empty()) {
		return mk_unit_type();
	}
	term_ref rest = props.back();
	for (std::size_t i = props.size() - 1; i-- > 0;) {
		rest = mk_sigma("_", props[i], rest);
	}
	return rest;
}

const char* gender_predicate(const std::string& gender) {
	return gender == "female" ? "female" : "male";
}

} // namespace

const std::set<std::string>& lexicon::anaphor_triggers() {
	static const std::set<std::string> triggers = {
	    "did too", "does too", "so does X", "so is X",
	    "did",     "herself",  "himself",   "this"};
	return triggers;
}

lexicon builtin_lexicon() {
	lexicon lex;
	lex.proper_names["John"] = {"j", "male"};
	lex.proper_names["Mary"] = {"m", "female"};
	lex.proper_names["Fred"] = {"f", "male"};
	lex.proper_names["Bob"] = {"b", "male"};
	lex.proper_names["Ann"] = {"a", "female"};
	lex.proper_names["Canberra"] = {"canberra", ""};
	lex.proper_names["London"] = {"london", ""};
	lex.proper_names["Sunday"] = {"sunday", ""};

	lex.verbs["left"] = {"left", false, false, ""};
	lex.verbs["walks"] = {"walk", false, false, ""};
	lex.verbs["entered"] = {"entered", false, false, ""};
	lex.verbs["ate"] = {"ate", true, false, ""};
	lex.verbs["likes"] = {"like", true, false, ""};
	lex.verbs["loves"] = {"loved", true, false, "loves"};
	lex.verbs["loved"] = {"loved", true, false, ""};
	lex.verbs["buttered"] = {"butter", true, false, ""};
	lex.verbs["hit"] = {"hit", true, true, ""};
	lex.verbs["believe"] = {"believed", true, false, ""};
	lex.verbs["believed"] = {"believed", true, false, ""};

	lex.participles["loved"] = "loved";
	lex.participles["hit"] = "hit";
	lex.participles["held"] = "held";

	lex.adverbs["quietly"] = "quietly";
	lex.adverbs["slowly"] = "slowly";
	lex.adverbs["deliberately"] = "deliberately";

	lex.event_adjectives["surprising"] = "surprising";
	lex.entity_adjectives["slow"] = "slow";

	lex.definite_nouns["cake"] = "c";
	lex.definite_nouns["toast"] = "t";
	lex.definite_nouns["fair"] = "fair";
	lex.definite_nouns["bathroom"] = "bathroom";

	lex.indefinite_nouns["flood"] = "flood";
	lex.indefinite_nouns["knife"] = "knife";
	lex.indefinite_nouns["man"] = "man";

	lex.possessable_nouns["hat"] = "hat";

	lex.prepositions["in"] = "in";
	lex.prepositions["at"] = "at";
	lex.prepositions["with"] = "with";
	lex.prepositions["on"] = "on";

	lex.time_modifiers["last night"] = "ln";
	lex.time_modifiers["at midnight"] = "midnight";
	return lex;
}

lexicon parse_lexicon(const std::string& text) {
	lexicon lex = builtin_lexicon();
	std::istringstream in(text);
	std::string line;
	std::size_t line_no = 0;
	while (std::getline(in, line)) {
		++line_no;
		const auto hash = line.find('#');
		if (hash != std::string::npos) {
			line = line.substr(0, hash);
		}
		std::vector<std::string> fields;
		std::string field;
		std::istringstream fs(line);
		while (std::getline(fs, field, '|')) {
			const auto first = field.find_first_not_of(" \t");
			const auto last = field.find_last_not_of(" \t");
			fields.push_back(first == std::string::npos
			                     ? ""
			                     : field.substr(first, last - first + 1));
		}
		while (!fields.empty() && fields.back().empty()) {
			fields.pop_back();
		}
		if (fields.empty()) {
			continue;
		}
		if (fields.size() < 3) {
			throw lexicon_error("expected `surface | category | constant`",
			                    line_no);
		}
		const std::string& surface = fields[0];
		const std::string category = lower(fields[1]);
		const std::string& constant = fields[2];
		std::vector<std::string> flags(fields.begin() + 3, fields.end());
		if (surface.empty() || constant.empty()) {
			throw lexicon_error("empty surface or constant", line_no);
		}
		if (category == "name") {
			lexical_name entry{constant, ""};
			for (const auto& flag : flags) {
				if (flag == "female" || flag == "male") {
					entry.gender = flag;
				} else {
					throw lexicon_error("unknown name flag: " + flag,
					                    line_no);
				}
			}
			lex.proper_names[surface] = entry;
		} else if (category == "verb") {
			lexical_verb entry{constant, false, false, ""};
			for (const auto& flag : flags) {
				if (flag == "transitive") {
					entry.transitive = true;
				} else if (flag == "locative-patient") {
					entry.locative_patient = true;
				} else if (flag.rfind("direct=", 0) == 0) {
					entry.direct_constant = flag.substr(7);
				} else {
					throw lexicon_error("unknown verb flag: " + flag,
					                    line_no);
				}
			}
			lex.verbs[lower(surface)] = entry;
		} else if (category == "participle") {
			lex.participles[lower(surface)] = constant;
		} else if (category == "adverb") {
			lex.adverbs[lower(surface)] = constant;
		} else if (category == "adjective-event") {
			lex.event_adjectives[lower(surface)] = constant;
		} else if (category == "adjective-entity") {
			lex.entity_adjectives[lower(surface)] = constant;
		} else if (category == "noun-definite") {
			lex.definite_nouns[lower(surface)] = constant;
		} else if (category == "noun-indefinite") {
			lex.indefinite_nouns[lower(surface)] = constant;
		} else if (category == "noun-possessable") {
			lex.possessable_nouns[lower(surface)] = constant;
		} else if (category == "preposition") {
			lex.prepositions[lower(surface)] = constant;
		} else if (category == "time") {
			lex.time_modifiers[lower(surface)] = constant;
		} else {
			throw lexicon_error("unknown category: " + category, line_no);
		}
	}
	return lex;
}

namespace {

std::string gender_fact_constant(const lexical_name& name) {
	if (name.gender.empty()) {
		return "";
	}
	return name.constant + (name.gender == "female" ? "f" : "m");
}

} // namespace

void extend_signature(global_signature& sig, const lexicon& lex) {
	const term_ref entity = mk_const("entity");
	const term_ref event = mk_const("event");
	const term_ref ty = mk_sort(sort_kind::type);
	const term_ref entity_pred = mk_pi("x", entity, ty);
	const term_ref event_pred = mk_pi("e", event, ty);
	const term_ref event_entity = mk_pi("e", event, mk_pi("x", entity, ty));
	const term_ref entity_entity =
	    mk_pi("x", entity, mk_pi("y", entity, ty));
	auto declare = [&](const std::string& name, const term_ref& type) {
		if (!name.empty() && !sig.lookup(name)) {
			sig.declare(name, type);
		}
	};

	for (const auto& [surface, entry] : lex.proper_names) {
		declare(entry.constant, entity);
		if (!entry.gender.empty()) {
			declare(gender_fact_constant(entry),
			        pred1(gender_predicate(entry.gender),
			              mk_const(entry.constant)));
		}
	}
	for (const auto& [surface, entry] : lex.verbs) {
		declare(entry.event_constant, event_pred);
		declare(entry.direct_constant, entity_entity);
	}
	for (const auto& [surface, constant] : lex.participles) {
		declare(constant, event_pred);
	}
	for (const auto& [surface, constant] : lex.adverbs) {
		declare(constant, event_pred);
	}
	for (const auto& [surface, constant] : lex.event_adjectives) {
		declare(constant, event_pred);
	}
	for (const auto& [surface, constant] : lex.entity_adjectives) {
		declare(constant, entity_pred);
	}
	for (const auto& [surface, constant] : lex.definite_nouns) {
		declare(constant, entity);
	}
	for (const auto& [surface, constant] : lex.indefinite_nouns) {
		declare(constant, entity_pred);
	}
	for (const auto& [surface, constant] : lex.possessable_nouns) {
		declare(constant, entity_pred);
	}
	for (const auto& [surface, constant] : lex.prepositions) {
		declare(constant, event_entity);
	}
	for (const auto& [surface, constant] : lex.time_modifiers) {
		declare(constant, entity);
	}
}

global_signature fragment_signature() {
	global_signature sig = base_signature();
	const term_ref entity = mk_const("entity");
	const term_ref event = mk_const("event");
	const term_ref ty = mk_sort(sort_kind::type);
	sig.declare("female", mk_pi("x", entity, ty));
	sig.declare("male", mk_pi("x", entity, ty));
	sig.declare("owner", mk_pi("x", entity, mk_pi("y", entity, ty)));
	sig.declare("before", mk_pi("e", event, mk_pi("e'", event, ty)));
	sig.declare("patientp", mk_pi("e", event, mk_pi("e'", event, ty)));
	extend_signature(sig, builtin_lexicon());
	return sig;
}

std::vector<std::string> lexicon_missing(const lexicon& lex,
                                         const global_signature& sig) {
	std::vector<std::string> missing;
	auto need = [&](const std::string& name) {
		if (!name.empty() && !sig.lookup(name) &&
		    std::find(missing.begin(), missing.end(), name) ==
		        missing.end()) {
			missing.push_back(name);
		}
	};
	for (const auto& [surface, entry] : lex.proper_names) {
		need(entry.constant);
		need(gender_fact_constant(entry));
	}
	for (const auto& [surface, entry] : lex.verbs) {
		need(entry.event_constant);
		need(entry.direct_constant);
	}
	for (const auto& table :
	     {lex.participles, lex.adverbs, lex.event_adjectives,
	      lex.entity_adjectives, lex.definite_nouns, lex.indefinite_nouns,
	      lex.possessable_nouns, lex.prepositions, lex.time_modifiers}) {
		for (const auto& [surface, constant] : table) {
			need(constant);
		}
	}
	return missing;
}

namespace {

struct token_stream {
	const lexicon& lex;
	std::vector<std::string> words;
	std::size_t i = 0;

	bool done() const { return i >= words.size(); }
	const std::string& peek() const { return words[i]; }
	std::string peek_lower() const { return lower(words[i]); }
	std::string next_lower(std::size_t offset = 1) const {
		return i + offset < words.size() ? lower(words[i + offset]) : "";
	}
	std::string take() { return words[i++]; }
};

noun_phrase parse_np(token_stream& toks) {
	if (toks.done()) {
		throw unsupported_construction("expected a noun phrase");
	}
	const std::string word = toks.take();
	const std::string lw = lower(word);
	if (lw == "the") {
		if (toks.done()) {
			throw unsupported_construction("expected a noun after 'the'");
		}
		const std::string noun = lower(toks.take());
		if (!toks.lex.definite_nouns.count(noun)) {
			throw unknown_word(noun);
		}
		return {noun_phrase::form::definite, noun};
	}
	if (lw == "a" || lw == "an") {
		if (toks.done()) {
			throw unsupported_construction(
			    "expected a noun after the article");
		}
		const std::string noun = lower(toks.take());
		if (!toks.lex.indefinite_nouns.count(noun)) {
			throw unknown_word(noun);
		}
		return {noun_phrase::form::indefinite, noun};
	}
	if (lw == "his" || lw == "her") {
		if (toks.done()) {
			throw unsupported_construction(
			    "expected a noun after the possessive");
		}
		const std::string noun = lower(toks.take());
		if (!toks.lex.possessable_nouns.count(noun)) {
			throw unknown_word(noun);
		}
		return {noun_phrase::form::possessed, noun};
	}
	if (lw == "herself" || lw == "himself") {
		return {noun_phrase::form::reflexive, lw};
	}
	if (lw == "this") {
		return {noun_phrase::form::demonstrative, lw};
	}
	if (toks.lex.proper_names.count(word)) {
		return {noun_phrase::form::proper, word};
	}
	throw unknown_word(word);
}

bool starts_time_modifier(const token_stream& toks) {
	if (toks.done()) {
		return false;
	}
	std::string key = toks.peek_lower();
	if (toks.lex.time_modifiers.count(key)) {
		return true;
	}
	if (toks.i + 1 < toks.words.size()) {
		key += " " + toks.next_lower();
		if (toks.lex.time_modifiers.count(key)) {
			return true;
		}
	}
	return false;
}

std::string take_time_modifier(token_stream& toks) {
	std::string key = lower(toks.take());
	if (toks.lex.time_modifiers.count(key)) {
		return key;
	}
	key += " " + lower(toks.take());
	return key;
}

void parse_modifiers(token_stream& toks, sentence_tree& tree) {
	while (!toks.done()) {
		const std::string lw = toks.peek_lower();
		if (starts_time_modifier(toks)) {
			tree.time_modifiers.push_back(take_time_modifier(toks));
			continue;
		}
		if (toks.lex.adverbs.count(lw)) {
			tree.adverbs.push_back(lw);
			toks.take();
			continue;
		}
		if (toks.lex.prepositions.count(lw)) {
			toks.take();
			tree.prepositional.emplace_back(lw, parse_np(toks));
			continue;
		}
		if (lw == "before") {
			toks.take();
			tree.before_subject = parse_np(toks);
			if (toks.done() || toks.peek_lower() != "did") {
				throw unsupported_construction(
				    "expected 'did' to close the 'before' clause");
			}
			toks.take();
			continue;
		}
		throw unsupported_construction("unexpected word: " + toks.peek());
	}
}

} // namespace

sentence_tree parse_sentence(const lexicon& lex, const std::string& text) {
	token_stream toks{lex, tokenize(text), 0};
	if (toks.done()) {
		throw unsupported_construction("empty sentence");
	}
	sentence_tree tree;

	// Discourse connectives carry no content here.
	{
		const std::string lw = toks.peek_lower();
		if ((lw == "but" || lw == "and" || lw == "then") &&
		    toks.words.size() > toks.i + 1) {
			toks.take();
		}
	}

	// "So does X." / "So is X."
	if (toks.peek_lower() == "so" &&
	    (toks.next_lower() == "does" || toks.next_lower() == "is")) {
		toks.take();
		const std::string aux = lower(toks.take());
		tree.anaphoric = true;
		tree.voice =
		    aux == "is" ? voice_kind::passive : voice_kind::active;
		tree.subject = parse_np(toks);
		if (!toks.done()) {
			throw unsupported_construction(
			    "unexpected words after the anaphoric clause");
		}
		return tree;
	}

	// "What happened in X is ADJ."
	if (toks.peek_lower() == "what" && toks.next_lower() == "happened" &&
	    toks.next_lower(2) == "in") {
		toks.take();
		toks.take();
		toks.take();
		noun_phrase place = parse_np(toks);
		if (place.kind != noun_phrase::form::proper) {
			throw unsupported_construction(
			    "'what happened in' expects a place name");
		}
		tree.happened_in = place.noun;
		if (toks.done() || toks.peek_lower() != "is") {
			throw unsupported_construction(
			    "expected 'is' after 'what happened in X'");
		}
		toks.take();
		if (toks.done()) {
			throw unsupported_construction("expected an adjective");
		}
		const std::string adj = lower(toks.take());
		if (!lex.event_adjectives.count(adj)) {
			throw unknown_word(adj);
		}
		tree.adjective = adj;
		if (!toks.done()) {
			throw unsupported_construction(
			    "unexpected words after the adjective");
		}
		return tree;
	}

	// Subject.
	{
		const std::string lw = toks.peek_lower();
		if (lw == "he" || lw == "she") {
			tree.subject_pronoun_gender =
			    lw == "she" ? "female" : "male";
			toks.take();
		} else {
			tree.subject = parse_np(toks);
		}
	}
	if (toks.done()) {
		throw unsupported_construction("sentence has no verb phrase");
	}

	// Adverbs preceding the verb.
	while (!toks.done() && lex.adverbs.count(toks.peek_lower())) {
		tree.adverbs.push_back(toks.peek_lower());
		toks.take();
	}
	if (toks.done()) {
		throw unsupported_construction("sentence has no verb phrase");
	}

	const std::string head = toks.peek_lower();
	if (head == "did") {
		toks.take();
		if (toks.done()) {
			tree.anaphoric = true;
			return tree;
		}
		const std::string next = toks.peek_lower();
		if (next == "too") {
			toks.take();
			tree.anaphoric = true;
			if (!toks.done()) {
				throw unsupported_construction(
				    "unexpected words after 'did too'");
			}
			return tree;
		}
		if (next == "not") {
			toks.take();
			tree.negated = true;
			// Falls through to the plain-verb clause below.
		} else {
			throw unsupported_construction("expected 'too' or 'not' "
			                               "after 'did'");
		}
	} else if (head == "does" && toks.next_lower() == "too") {
		toks.take();
		toks.take();
		tree.anaphoric = true;
		if (!toks.done()) {
			throw unsupported_construction(
			    "unexpected words after 'does too'");
		}
		return tree;
	} else if (head == "is" || head == "was") {
		toks.take();
		if (toks.done()) {
			throw unsupported_construction(
			    "expected a predicate after the copula");
		}
		const std::string next = toks.peek_lower();
		if (lex.event_adjectives.count(next) ||
		    lex.entity_adjectives.count(next)) {
			tree.adjective = next;
			toks.take();
			if (!toks.done()) {
				throw unsupported_construction(
				    "unexpected words after the adjective");
			}
			return tree;
		}
		if (lex.participles.count(next)) {
			tree.voice = voice_kind::passive;
			tree.verb = next;
			toks.take();
			if (!toks.done() && toks.peek_lower() == "by") {
				toks.take();
				tree.by_agent = parse_np(toks);
			}
			parse_modifiers(toks, tree);
			return tree;
		}
		throw unknown_word(toks.peek());
	}

	// Plain (or "did not") verb clause.
	if (toks.done()) {
		throw unsupported_construction("sentence has no verb");
	}
	const std::string verb = lower(toks.take());
	if (!lex.verbs.count(verb)) {
		throw unknown_word(verb);
	}
	tree.verb = verb;
	if (!toks.done()) {
		const std::string lw = toks.peek_lower();
		const bool modifier_next = lw == "before" ||
		                           lex.prepositions.count(lw) != 0 ||
		                           lex.adverbs.count(lw) != 0 ||
		                           starts_time_modifier(toks);
		if (!modifier_next) {
			tree.object = parse_np(toks);
		}
	}
	parse_modifiers(toks, tree);
	return tree;
}

namespace {

struct hoisted_pack {
	std::string binder;
	term_ref type;
};

const lexical_name& named_entry(const lexicon& lex, const noun_phrase& np) {
	auto it = lex.proper_names.find(np.noun);
	if (it == lex.proper_names.end()) {
		throw unknown_word(np.noun);
	}
	return it->second;
}

// The entity term an argument noun phrase denotes, hoisting the pack a
// non-referential phrase introduces.
term_ref np_value(const lexicon& lex, const noun_phrase& np,
                  const std::optional<noun_phrase>& subject,
                  std::vector<hoisted_pack>& packs,
                  std::set<std::string>& used) {
	switch (np.kind) {
	case noun_phrase::form::proper:
		return mk_const(named_entry(lex, np).constant);
	case noun_phrase::form::definite:
		return mk_const(lex.definite_nouns.at(np.noun));
	case noun_phrase::form::indefinite: {
		const std::string binder = fresh_name("v", used);
		used.insert(binder);
		term_ref type =
		    mk_sigma("x", mk_const("entity"),
		             pred1(lex.indefinite_nouns.at(np.noun), mk_var("x")));
		packs.push_back({binder, type});
		return mk_proj1(mk_var(binder));
	}
	case noun_phrase::form::possessed: {
		if (!subject || subject->kind != noun_phrase::form::proper) {
			throw unsupported_construction(
			    "a possessive needs a named subject");
		}
		const std::string owner = named_entry(lex, *subject).constant;
		const std::string binder = fresh_name("v", used);
		used.insert(binder);
		term_ref type = mk_sigma(
		    "x", mk_const("entity"),
		    mk_sigma("_",
		             pred1(lex.possessable_nouns.at(np.noun), mk_var("x")),
		             pred2("owner", mk_var("x"), mk_const(owner))));
		packs.push_back({binder, type});
		return mk_proj1(mk_var(binder));
	}
	default:
		throw unsupported_construction(
		    "noun phrase cannot be used as an argument here");
	}
}

term_ref vp_ascription(voice_kind voice) {
	const char* role = voice == voice_kind::active ? "agent" : "patient";
	return mk_pi("x", mk_const("entity"),
	             mk_sigma("e'", mk_const("event"),
	                      pred2(role, mk_var("e'"), mk_var("x"))));
}

term_ref gender_ascription(const std::string& gender) {
	return mk_sigma("x", mk_const("entity"),
	                pred1(gender_predicate(gender), mk_var("x")));
}

term_ref event_top_ascription() {
	return mk_sigma("e", mk_const("event"), mk_unit_type());
}

} // namespace

dynamic_prop interpret_sentence(const lexicon& lex,
                                const sentence_tree& tree,
                                anaphor_state& state) {
	const std::string cv = "c";
	const term_ref cvar = mk_var(cv);

	// "What happened in X is ADJ.": the subject refers to an event the
	// context must supply, filtered by its location.
	if (tree.happened_in) {
		const auto& place = lex.proper_names.at(*tree.happened_in);
		term_ref asc =
		    mk_sigma("e", mk_const("event"),
		             pred2("in", mk_var("e"), mk_const(place.constant)));
		const std::size_t index = state.next_index++;
		state.hints[index] = {};
		term_ref site =
		    mk_application(mk_at_op(index, asc), cvar);
		term_ref body = pred1(lex.event_adjectives.at(*tree.adjective),
		                      mk_proj1(site));
		return {mk_lambda(cv, body)};
	}

	// Copular adjective.
	if (tree.adjective) {
		if (tree.subject_pronoun_gender) {
			term_ref asc = gender_ascription(*tree.subject_pronoun_gender);
			const std::size_t index = state.next_index++;
			state.hints[index] = {};
			term_ref site = mk_application(mk_at_op(index, asc), cvar);
			term_ref body = pred1(
			    lex.entity_adjectives.at(*tree.adjective), mk_proj1(site));
			return {mk_lambda(cv, body)};
		}
		if (tree.subject && tree.subject->kind == noun_phrase::form::proper) {
			term_ref subj = mk_const(named_entry(lex, *tree.subject).constant);
			auto it = lex.entity_adjectives.find(*tree.adjective);
			if (it == lex.entity_adjectives.end()) {
				throw unsupported_construction(
				    "adjective does not describe an entity: " +
				    *tree.adjective);
			}
			return {mk_lambda(cv, pred1(it->second, subj))};
		}
		throw unsupported_construction(
		    "unsupported subject for a copular clause");
	}

	// Bare anaphoric verb phrase: the context must supply the predicate.
	if (tree.anaphoric) {
		if (!tree.subject || tree.subject->kind != noun_phrase::form::proper) {
			throw unsupported_construction(
			    "an anaphoric clause needs a named subject");
		}
		term_ref subj = mk_const(named_entry(lex, *tree.subject).constant);
		const std::size_t index = state.next_index++;
		resolution_hints hints;
		hints.voice = tree.voice;
		state.hints[index] = hints;
		term_ref site =
		    mk_application(mk_at_op(index, vp_ascription(tree.voice)), cvar);
		return {mk_lambda(cv, mk_application(site, subj))};
	}

	if (tree.verb.empty()) {
		throw unsupported_construction("sentence has no predicate");
	}

	// Reflexive object of a relation-denoting verb: the object refers
	// back to the subject through the context, so the subject and its
	// gender fact are pushed onto the site's context.
	if (tree.object &&
	    tree.object->kind == noun_phrase::form::reflexive) {
		auto verb_it = lex.verbs.find(tree.verb);
		if (verb_it == lex.verbs.end() ||
		    verb_it->second.direct_constant.empty()) {
			throw unsupported_construction(
			    "verb has no relational reading for a reflexive object: " +
			    tree.verb);
		}
		if (!tree.subject ||
		    tree.subject->kind != noun_phrase::form::proper) {
			throw unsupported_construction(
			    "a reflexive needs a named subject");
		}
		const auto& name = named_entry(lex, *tree.subject);
		const std::string gender =
		    tree.object->noun == "herself" ? "female" : "male";
		const std::string fact = gender_fact_constant(name);
		if (name.gender != gender || fact.empty()) {
			throw unsupported_construction(
			    "reflexive gender does not match the subject");
		}
		const std::size_t index = state.next_index++;
		state.hints[index] = {};
		term_ref subj = mk_const(name.constant);
		term_ref site_context =
		    mk_pair(cvar, mk_pair(subj, mk_const(fact)));
		term_ref site = mk_application(
		    mk_at_op(index, gender_ascription(gender)), site_context);
		term_ref body = pred2(verb_it->second.direct_constant, subj,
		                      mk_proj1(site));
		return {mk_lambda(cv, body)};
	}

	// Eventized clause.
	const lexical_verb* verb = nullptr;
	if (tree.voice == voice_kind::active) {
		verb = &lex.verbs.at(tree.verb);
	} else {
		auto it = lex.verbs.find(tree.verb);
		verb = it != lex.verbs.end() ? &it->second : nullptr;
	}
	std::string nature = verb != nullptr ? verb->event_constant
	                                     : lex.participles.at(tree.verb);

	std::vector<hoisted_pack> packs;
	std::set<std::string> used = {cv, "e", "u", "w", "x"};

	std::optional<term_ref> agent;
	std::optional<term_ref> patient;
	std::optional<std::size_t> demonstrative_index;
	if (tree.voice == voice_kind::active) {
		if (tree.subject) {
			agent = np_value(lex, tree.subject.value(), tree.subject,
			                 packs, used);
		} else if (tree.subject_pronoun_gender) {
			const std::size_t index = state.next_index++;
			state.hints[index] = {};
			term_ref site = mk_application(
			    mk_at_op(index,
			             gender_ascription(*tree.subject_pronoun_gender)),
			    cvar);
			agent = mk_proj1(site);
		}
		if (tree.object) {
			if (tree.object->kind == noun_phrase::form::demonstrative) {
				demonstrative_index = state.next_index++;
				state.hints[*demonstrative_index] = {};
			} else {
				patient = np_value(lex, tree.object.value(), tree.subject,
				                   packs, used);
			}
		}
	} else {
		if (tree.subject) {
			patient = np_value(lex, tree.subject.value(), tree.subject,
			                   packs, used);
		}
		if (tree.by_agent) {
			agent = np_value(lex, tree.by_agent.value(), tree.subject,
			                 packs, used);
		}
	}

	std::vector<term_ref> mod_values;
	std::vector<std::string> mod_preps;
	for (const auto& [prep, np] : tree.prepositional) {
		mod_preps.push_back(lex.prepositions.at(prep));
		mod_values.push_back(
		    np_value(lex, np, tree.subject, packs, used));
	}

	const term_ref e = mk_var("e");
	std::vector<term_ref> props;
	props.push_back(pred1(nature, e));
	if (agent) {
		props.push_back(pred2("agent", e, *agent));
	}
	if (patient) {
		props.push_back(pred2("patient", e, *patient));
	}
	if (demonstrative_index) {
		term_ref site = mk_application(
		    mk_at_op(*demonstrative_index, event_top_ascription()), cvar);
		props.push_back(pred2("patientp", e, mk_proj1(site)));
	}
	if (verb != nullptr && verb->locative_patient && patient) {
		props.push_back(pred2("in", e, *patient));
	}
	for (const auto& adv : tree.adverbs) {
		props.push_back(pred1(lex.adverbs.at(adv), e));
	}
	for (std::size_t i = 0; i < mod_values.size(); ++i) {
		props.push_back(pred2(mod_preps[i], e, mod_values[i]));
	}
	for (const auto& tm : tree.time_modifiers) {
		props.push_back(
		    pred2("at", e, mk_const(lex.time_modifiers.at(tm))));
	}

	term_ref core =
	    mk_sigma("e", mk_const("event"), right_nested(props));
	for (auto it = packs.rbegin(); it != packs.rend(); ++it) {
		core = mk_sigma(it->binder, it->type, core);
	}

	// Trailing "before Y did": a second, anaphoric event follows the
	// first, related by before.
	if (tree.before_subject) {
		if (tree.before_subject->kind != noun_phrase::form::proper) {
			throw unsupported_construction(
			    "the 'before' clause needs a named subject");
		}
		term_ref subj2 =
		    mk_const(named_entry(lex, *tree.before_subject).constant);
		const std::size_t index = state.next_index++;
		resolution_hints hints;
		hints.voice = voice_kind::active;
		state.hints[index] = hints;

		term_ref first_event = mk_var("u");
		for (std::size_t i = 0; i < packs.size(); ++i) {
			first_event = mk_proj2(first_event);
		}
		first_event = mk_proj1(first_event);

		term_ref site = mk_application(
		    mk_application(mk_at_op(index, vp_ascription(voice_kind::active)),
		                   mk_pair(cvar, mk_var("u"))),
		    subj2);
		term_ref body = mk_sigma(
		    "u", core,
		    mk_sigma("w", site,
		             pred2("before", first_event, mk_proj1(mk_var("w")))));
		return {mk_lambda(cv, body)};
	}

	return {mk_lambda(cv, core)};
}

dynamic_prop sequence_discourse(const std::vector<dynamic_prop>& props) {
	if (props.empty()) {
		throw unsupported_construction(
		    "a discourse needs at least one sentence");
	}
	dynamic_prop acc = props.front();
	for (std::size_t i = 1; i < props.size(); ++i) {
		const term_ref& d1 = acc.term;
		const term_ref& d2 = props[i].term;
		if (d1->kind != term_kind::lambda ||
		    d2->kind != term_kind::lambda) {
			throw unsupported_construction(
			    "dynamic propositions must abstract over the context");
		}
		std::set<std::string> avoid = free_vars(d1);
		auto fv2 = free_vars(d2);
		avoid.insert(fv2.begin(), fv2.end());
		const std::string cv = fresh_name("c", avoid);
		avoid.insert(cv);
		const std::string uv = fresh_name("u", avoid);
		term_ref first = substitute(d1->b, d1->name, mk_var(cv));
		term_ref second = substitute(
		    d2->b, d2->name, mk_pair(mk_var(cv), mk_var(uv)));
		acc.term = mk_lambda(cv, mk_sigma(uv, first, second));
	}
	return acc;
}

discourse build_discourse(const lexicon& lex, const std::string& text) {
	discourse out;
	std::istringstream in(text);
	std::string line;
	anaphor_state state;
	std::vector<dynamic_prop> props;
	while (std::getline(in, line)) {
		const auto hash = line.find('#');
		if (hash != std::string::npos) {
			line = line.substr(0, hash);
		}
		if (line.find_first_not_of(" \t\r") == std::string::npos) {
			continue;
		}
		sentence_tree tree = parse_sentence(lex, line);
		props.push_back(interpret_sentence(lex, tree, state));
		out.sentences.push_back(line);
	}
	out.prop = sequence_discourse(props);
	out.hints = state.hints;
	return out;
}

} // namespace dtse
