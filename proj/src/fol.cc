#include "dtse/fol.h"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "dtse/normalize.h"

namespace dtse {

namespace {

fol_ref make(fol_formula f) {
	return std::make_shared<const fol_formula>(std::move(f));
}

} // namespace

fol_ref fol_exists(const std::string& var, fol_sort sort,
                   const fol_ref& body) {
	fol_formula f;
	f.kind = fol_kind::exists;
	f.var = var;
	f.sort = sort;
	f.a = body;
	return make(std::move(f));
}

fol_ref fol_forall(const std::string& var, fol_sort sort,
                   const fol_ref& body) {
	fol_formula f;
	f.kind = fol_kind::forall;
	f.var = var;
	f.sort = sort;
	f.a = body;
	return make(std::move(f));
}

fol_ref fol_and(const fol_ref& l, const fol_ref& r) {
	fol_formula f;
	f.kind = fol_kind::conj;
	f.a = l;
	f.b = r;
	return make(std::move(f));
}

fol_ref fol_not(const fol_ref& body) {
	fol_formula f;
	f.kind = fol_kind::neg;
	f.a = body;
	return make(std::move(f));
}

fol_ref fol_pred(const std::string& name,
                 const std::vector<std::string>& args) {
	fol_formula f;
	f.kind = fol_kind::pred;
	f.name = name;
	f.args = args;
	return make(std::move(f));
}

fol_ref fol_true() {
	static const fol_ref t = fol_pred("true", {});
	return t;
}

bool fol_eq(const fol_ref& a, const fol_ref& b) {
	if (a == b) {
		return true;
	}
	if (!a || !b || a->kind != b->kind) {
		return false;
	}
	switch (a->kind) {
	case fol_kind::exists:
	case fol_kind::forall:
		return a->var == b->var && a->sort == b->sort &&
		       fol_eq(a->a, b->a);
	case fol_kind::conj:
		return fol_eq(a->a, b->a) && fol_eq(a->b, b->b);
	case fol_kind::neg:
		return fol_eq(a->a, b->a);
	case fol_kind::pred:
		return a->name == b->name && a->args == b->args;
	}
	return false;
}

namespace {

bool is_true(const fol_ref& f) {
	return f->kind == fol_kind::pred && f->name == "true" &&
	       f->args.empty();
}

bool atomic_domain(const term_ref& t) {
	return t->kind == term_kind::constant &&
	       (t->name == "entity" || t->name == "event");
}

fol_sort sort_of(const term_ref& t) {
	return t->name == "event" ? fol_sort::event : fol_sort::entity;
}

} // namespace

term_ref flatten_interpretation(const global_signature& sig,
                                const term_ref& interpretation) {
	normalize_options nopts;
	nopts.use_delta = false;
	auto norm = [&](const term_ref& t) { return normalize(sig, t, nopts); };

	std::function<term_ref(const term_ref&)> go =
	    [&](const term_ref& raw) -> term_ref {
		term_ref t = norm(raw);
		if (t->kind == term_kind::pi) {
			return mk_pi(t->name, go(t->a), go(t->b));
		}
		if (t->kind != term_kind::sigma) {
			return t;
		}
		const term_ref& domain = t->a;
		if (domain->kind == term_kind::unit_type) {
			return go(substitute(t->b, t->name, mk_const("unit")));
		}
		if (domain->kind == term_kind::sigma) {
			// Reassociate: the binder for the pair splits into one
			// binder per component, substituted back as a pair. The
			// split must follow the domain as written — projections in
			// the body address that structure — so the domain's own
			// components are flattened by the recursion afterwards.
			std::set<std::string> avoid = free_vars(t->b);
			auto fv = free_vars(domain);
			avoid.insert(fv.begin(), fv.end());
			avoid.insert(t->name);
			avoid.insert(domain->name);
			const std::string x = fresh_name(
			    domain->name == "_" ? "h" : domain->name, avoid);
			avoid.insert(x);
			const std::string z = fresh_name(
			    t->name == "_" ? "h" : t->name, avoid);
			term_ref inner =
			    substitute(domain->b, domain->name, mk_var(x));
			term_ref body = substitute(
			    t->b, t->name, mk_pair(mk_var(x), mk_var(z)));
			return go(mk_sigma(x, domain->a, mk_sigma(z, inner, body)));
		}
		return mk_sigma(t->name, go(domain), go(t->b));
	};
	return go(interpretation);
}

namespace {

// Predicate names whose calculus spelling differs from the display
// spelling: the patient-of-an-event relation prints as plain patient.
const std::map<std::string, std::string>& predicate_display_names() {
	static const std::map<std::string, std::string> names = {
	    {"patientp", "patient"}};
	return names;
}

struct translator {
	std::set<std::string> used;

	std::string unique_name(const std::string& base) {
		std::string name = base;
		while (used.count(name) != 0) {
			name += "'";
		}
		used.insert(name);
		return name;
	}

	std::string arg_of(const term_ref& t, const term_ref& origin) {
		if (t->kind == term_kind::variable ||
		    t->kind == term_kind::constant) {
			return t->name;
		}
		throw untranslatable(
		    "predicate argument is neither a variable nor a constant",
		    origin);
	}

	fol_ref go(const term_ref& t) {
		switch (t->kind) {
		case term_kind::unit_type:
			return fol_true();
		case term_kind::sigma: {
			if (atomic_domain(t->a)) {
				const std::string base =
				    t->name != "_"
				        ? t->name
				        : (sort_of(t->a) == fol_sort::event ? "e" : "x");
				const std::string name = unique_name(base);
				term_ref body =
				    substitute(t->b, t->name, mk_var(name));
				return fol_exists(name, sort_of(t->a), go(body));
			}
			if (t->a->kind == term_kind::unit_type) {
				return go(
				    substitute(t->b, t->name, mk_const("unit")));
			}
			if (free_vars(t->b).count(t->name) != 0) {
				throw untranslatable(
				    "a proof of a proposition is referred to later, "
				    "which has no first-order counterpart",
				    t);
			}
			return fol_and(go(t->a), go(t->b));
		}
		case term_kind::pi: {
			if (atomic_domain(t->a)) {
				const std::string base =
				    t->name != "_"
				        ? t->name
				        : (sort_of(t->a) == fol_sort::event ? "e" : "x");
				const std::string name = unique_name(base);
				term_ref body =
				    substitute(t->b, t->name, mk_var(name));
				return fol_forall(name, sort_of(t->a), go(body));
			}
			if (free_vars(t->b).count(t->name) != 0) {
				throw untranslatable(
				    "a proof of a hypothesis is referred to later, "
				    "which has no first-order counterpart",
				    t);
			}
			// A proposition-to-proposition function is an implication.
			return fol_not(fol_and(go(t->a), fol_not(go(t->b))));
		}
		case term_kind::application: {
			spine_view view = spine(t);
			if (view.head->kind != term_kind::constant) {
				throw untranslatable(
				    "proposition head is not a predicate constant", t);
			}
			std::string name = view.head->name;
			auto alias = predicate_display_names().find(name);
			if (alias != predicate_display_names().end()) {
				name = alias->second;
			}
			std::vector<std::string> args;
			for (const auto& arg : view.args) {
				args.push_back(arg_of(arg, t));
			}
			return fol_pred(name, args);
		}
		case term_kind::constant:
			return fol_pred(t->name, {});
		default:
			throw untranslatable(
			    "interpretation contains a construct with no "
			    "first-order counterpart",
			    t);
		}
	}
};

} // namespace

fol_ref to_fol(const global_signature& sig,
               const term_ref& interpretation) {
	term_ref flat = flatten_interpretation(sig, interpretation);
	translator tr;
	return tr.go(flat);
}

std::size_t count_exists(const fol_ref& f) {
	if (!f) {
		return 0;
	}
	std::size_t n = f->kind == fol_kind::exists ? 1 : 0;
	if (f->a) {
		n += count_exists(f->a);
	}
	if (f->b) {
		n += count_exists(f->b);
	}
	return n;
}

namespace {

void print_into(const fol_ref& f, std::ostringstream& out, bool left_of_and);

void print_quant(const fol_ref& f, std::ostringstream& out) {
	out << (f->kind == fol_kind::exists ? "∃" : "∀") << f->var;
	if (!is_true(f->a)) {
		out << ". ";
		print_into(f->a, out, false);
	}
}

void print_into(const fol_ref& f, std::ostringstream& out,
                bool left_of_and) {
	switch (f->kind) {
	case fol_kind::exists:
	case fol_kind::forall:
		if (left_of_and) {
			out << '(';
			print_quant(f, out);
			out << ')';
		} else {
			print_quant(f, out);
		}
		return;
	case fol_kind::conj:
		print_into(f->a, out, true);
		out << " ∧ ";
		print_into(f->b, out, left_of_and);
		return;
	case fol_kind::neg:
		out << "¬";
		if (f->a->kind == fol_kind::pred) {
			print_into(f->a, out, false);
		} else {
			out << '(';
			print_into(f->a, out, false);
			out << ')';
		}
		return;
	case fol_kind::pred:
		out << f->name;
		if (!f->args.empty()) {
			out << '(';
			for (std::size_t i = 0; i < f->args.size(); ++i) {
				if (i > 0) {
					out << ", ";
				}
				out << f->args[i];
			}
			out << ')';
		}
		return;
	}
}

} // namespace

std::string fol_to_string(const fol_ref& f) {
	std::ostringstream out;
	print_into(f, out, false);
	return out.str();
}

namespace {

struct fol_parser {
	const std::string& text;
	std::size_t pos = 0;

	[[noreturn]] void fail(const std::string& message) const {
		throw std::runtime_error("formula parse error at offset " +
		                         std::to_string(pos) + ": " + message);
	}

	void skip_space() {
		while (pos < text.size() &&
		       (text[pos] == ' ' || text[pos] == '\t')) {
			++pos;
		}
	}

	bool eat(const std::string& token) {
		skip_space();
		if (text.compare(pos, token.size(), token) == 0) {
			pos += token.size();
			return true;
		}
		return false;
	}

	bool peek(const std::string& token) {
		skip_space();
		return text.compare(pos, token.size(), token) == 0;
	}

	static bool name_char(char c) {
		return std::isalnum(static_cast<unsigned char>(c)) != 0 ||
		       c == '_' || c == '\'' || c == '!';
	}

	std::string name() {
		skip_space();
		std::string out;
		while (pos < text.size() && name_char(text[pos])) {
			out += text[pos++];
		}
		if (out.empty()) {
			fail("expected a name");
		}
		return out;
	}

	static fol_sort sort_of_name(const std::string& var) {
		return !var.empty() && var[0] == 'e' ? fol_sort::event
		                                     : fol_sort::entity;
	}

	// formula := conjunct ('∧' formula)?   — a quantifier on the right
	// of a conjunction scopes over the rest.
	fol_ref formula() {
		fol_ref left = conjunct();
		if (eat("∧")) {
			return fol_and(left, formula());
		}
		return left;
	}

	fol_ref conjunct() {
		skip_space();
		if (eat("∃")) {
			return quant_rest(true);
		}
		if (eat("∀")) {
			return quant_rest(false);
		}
		if (eat("¬")) {
			if (eat("(")) {
				fol_ref body = formula();
				if (!eat(")")) {
					fail("expected ')'");
				}
				return fol_not(body);
			}
			return fol_not(atom());
		}
		if (eat("(")) {
			fol_ref body = formula();
			if (!eat(")")) {
				fail("expected ')'");
			}
			return body;
		}
		return atom();
	}

	fol_ref quant_rest(bool existential) {
		const std::string var = name();
		fol_ref body = fol_true();
		if (eat(".")) {
			body = formula();
		}
		return existential
		           ? fol_exists(var, sort_of_name(var), body)
		           : fol_forall(var, sort_of_name(var), body);
	}

	fol_ref atom() {
		const std::string head = name();
		std::vector<std::string> args;
		if (eat("(")) {
			if (!peek(")")) {
				args.push_back(name());
				while (eat(",")) {
					args.push_back(name());
				}
			}
			if (!eat(")")) {
				fail("expected ')'");
			}
		}
		return fol_pred(head, args);
	}
};

} // namespace

fol_ref fol_parse(const std::string& text) {
	fol_parser p{text, 0};
	fol_ref out = p.formula();
	p.skip_space();
	if (p.pos != text.size()) {
		p.fail("trailing input after formula");
	}
	return out;
}

namespace {

// Printed form with every bound-variable occurrence blanked: the sorting
// key that makes conjunct order independent of variable naming.
void key_into(const fol_ref& f, std::set<std::string>& scope,
              std::ostringstream& out) {
	switch (f->kind) {
	case fol_kind::exists:
	case fol_kind::forall: {
		out << (f->kind == fol_kind::exists ? "E" : "A") << '['
		    << (f->sort == fol_sort::event ? 'e' : 'x') << ']';
		const bool added = scope.insert(f->var).second;
		key_into(f->a, scope, out);
		if (added) {
			scope.erase(f->var);
		}
		return;
	}
	case fol_kind::conj:
		out << '(';
		key_into(f->a, scope, out);
		out << "&";
		key_into(f->b, scope, out);
		out << ')';
		return;
	case fol_kind::neg:
		out << "!(";
		key_into(f->a, scope, out);
		out << ')';
		return;
	case fol_kind::pred:
		out << f->name << '(';
		for (std::size_t i = 0; i < f->args.size(); ++i) {
			if (i > 0) {
				out << ',';
			}
			out << (scope.count(f->args[i]) != 0 ? "?" : f->args[i]);
		}
		out << ')';
		return;
	}
}

std::string sort_key(const fol_ref& f, std::set<std::string>& scope) {
	std::ostringstream out;
	key_into(f, scope, out);
	return out.str();
}

void conjuncts_of(const fol_ref& f, std::vector<fol_ref>& out) {
	if (f->kind == fol_kind::conj) {
		conjuncts_of(f->a, out);
		conjuncts_of(f->b, out);
		return;
	}
	out.push_back(f);
}

fol_ref order_conjuncts(const fol_ref& f, std::set<std::string>& scope) {
	switch (f->kind) {
	case fol_kind::exists:
	case fol_kind::forall: {
		const bool added = scope.insert(f->var).second;
		fol_ref body = order_conjuncts(f->a, scope);
		if (added) {
			scope.erase(f->var);
		}
		return f->kind == fol_kind::exists
		           ? fol_exists(f->var, f->sort, body)
		           : fol_forall(f->var, f->sort, body);
	}
	case fol_kind::conj: {
		std::vector<fol_ref> parts;
		conjuncts_of(f, parts);
		std::vector<fol_ref> ordered;
		for (const auto& part : parts) {
			if (!is_true(part)) {
				ordered.push_back(order_conjuncts(part, scope));
			}
		}
		if (ordered.empty()) {
			return fol_true();
		}
		std::stable_sort(ordered.begin(), ordered.end(),
		                 [&](const fol_ref& a, const fol_ref& b) {
			                 return sort_key(a, scope) <
			                        sort_key(b, scope);
		                 });
		fol_ref acc = ordered.back();
		for (std::size_t i = ordered.size() - 1; i-- > 0;) {
			acc = fol_and(ordered[i], acc);
		}
		return acc;
	}
	case fol_kind::neg:
		return fol_not(order_conjuncts(f->a, scope));
	case fol_kind::pred:
		return f;
	}
	return f;
}

struct renamer {
	std::size_t events = 0;
	std::size_t entities = 0;
	std::map<std::string, std::vector<std::string>> active;

	std::string push(const std::string& var, fol_sort sort) {
		const std::string name =
		    sort == fol_sort::event
		        ? "e" + std::to_string(++events)
		        : "x" + std::to_string(++entities);
		active[var].push_back(name);
		return name;
	}

	void pop(const std::string& var) { active[var].pop_back(); }

	fol_ref go(const fol_ref& f) {
		switch (f->kind) {
		case fol_kind::exists:
		case fol_kind::forall: {
			const std::string name = push(f->var, f->sort);
			fol_ref body = go(f->a);
			pop(f->var);
			return f->kind == fol_kind::exists
			           ? fol_exists(name, f->sort, body)
			           : fol_forall(name, f->sort, body);
		}
		case fol_kind::conj:
			return fol_and(go(f->a), go(f->b));
		case fol_kind::neg:
			return fol_not(go(f->a));
		case fol_kind::pred: {
			std::vector<std::string> args;
			for (const auto& arg : f->args) {
				auto it = active.find(arg);
				if (it != active.end() && !it->second.empty()) {
					args.push_back(it->second.back());
				} else {
					args.push_back(arg);
				}
			}
			return fol_pred(f->name, args);
		}
		}
		return f;
	}
};

} // namespace

fol_ref canonical_fol(const fol_ref& f) {
	std::set<std::string> scope;
	fol_ref ordered = order_conjuncts(f, scope);
	renamer r;
	return r.go(ordered);
}

bool fol_equivalent(const fol_ref& a, const fol_ref& b) {
	return fol_eq(canonical_fol(a), canonical_fol(b));
}

} // namespace dtse
