#include "dtse/sexpr.h"

#include <cctype>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <vector>

namespace dtse {

namespace {

struct sexpr_node {
	// Atom when leaf is set, otherwise a list.
	std::optional<std::string> leaf;
	std::vector<sexpr_node> items;
	std::size_t line = 1;
	std::size_t column = 1;
};

class tokenizer {
public:
	explicit tokenizer(const std::string& text) : text_(text) {}

	struct token {
		enum class kind { open, close, atom, end };
		kind k;
		std::string text;
		std::size_t line;
		std::size_t column;
	};

	token next() {
		skip_blank();
		token t{token::kind::end, "", line_, column_};
		if (pos_ >= text_.size()) {
			return t;
		}
		const char c = text_[pos_];
		if (c == '(') {
			advance();
			t.k = token::kind::open;
			return t;
		}
		if (c == ')') {
			advance();
			t.k = token::kind::close;
			return t;
		}
		t.k = token::kind::atom;
		while (pos_ < text_.size() && !is_delimiter(text_[pos_])) {
			t.text += text_[pos_];
			advance();
		}
		return t;
	}

private:
	static bool is_delimiter(char c) {
		return c == '(' || c == ')' || c == ';' ||
		       std::isspace(static_cast<unsigned char>(c));
	}

	void skip_blank() {
		while (pos_ < text_.size()) {
			const char c = text_[pos_];
			if (c == ';') {
				while (pos_ < text_.size() && text_[pos_] != '\n') {
					advance();
				}
			} else if (std::isspace(static_cast<unsigned char>(c))) {
				advance();
			} else {
				break;
			}
		}
	}

	void advance() {
		if (text_[pos_] == '\n') {
			++line_;
			column_ = 1;
		} else {
			++column_;
		}
		++pos_;
	}

	const std::string& text_;
	std::size_t pos_ = 0;
	std::size_t line_ = 1;
	std::size_t column_ = 1;
};

sexpr_node read_node(tokenizer& toks, tokenizer::token first) {
	sexpr_node node;
	node.line = first.line;
	node.column = first.column;
	if (first.k == tokenizer::token::kind::atom) {
		node.leaf = first.text;
		return node;
	}
	if (first.k != tokenizer::token::kind::open) {
		throw parse_error("expected a term", first.line, first.column);
	}
	for (;;) {
		tokenizer::token t = toks.next();
		if (t.k == tokenizer::token::kind::close) {
			return node;
		}
		if (t.k == tokenizer::token::kind::end) {
			throw parse_error("unterminated list", node.line, node.column);
		}
		node.items.push_back(read_node(toks, t));
	}
}

const std::set<std::string> reserved_heads = {
    "pi", "sigma", "times", "lam", "pair", "p1", "p2", "at", "type", "kind"};

[[noreturn]] void fail(const sexpr_node& at, const std::string& message) {
	throw parse_error(message, at.line, at.column);
}

term_ref to_term(const sexpr_node& node, std::set<std::string>& bound);

term_ref name_term(const sexpr_node& node,
                   const std::set<std::string>& bound) {
	const std::string& name = *node.leaf;
	if (name == "type") {
		return mk_sort(sort_kind::type);
	}
	if (name == "kind") {
		return mk_sort(sort_kind::kind);
	}
	if (reserved_heads.count(name)) {
		fail(node, "reserved word '" + name + "' used as a name");
	}
	return bound.count(name) ? mk_var(name) : mk_const(name);
}

// Binder clause (x A) of pi and sigma forms.
std::pair<std::string, term_ref> to_binder(const sexpr_node& node,
                                           std::set<std::string>& bound) {
	if (node.leaf || node.items.size() != 2 || !node.items[0].leaf) {
		fail(node, "expected a binder clause (name type)");
	}
	const std::string& name = *node.items[0].leaf;
	if (reserved_heads.count(name)) {
		fail(node.items[0], "reserved word '" + name + "' used as a binder");
	}
	return {name, to_term(node.items[1], bound)};
}

template <typename Make>
term_ref binder_form(const sexpr_node& node, std::set<std::string>& bound,
                     Make make) {
	if (node.items.size() != 3) {
		fail(node, "expected (" + *node.items[0].leaf + " (name type) body)");
	}
	auto [name, domain] = to_binder(node.items[1], bound);
	const bool fresh = bound.insert(name).second;
	term_ref body = to_term(node.items[2], bound);
	if (fresh) {
		bound.erase(name);
	}
	return make(name, domain, body);
}

term_ref to_term(const sexpr_node& node, std::set<std::string>& bound) {
	if (node.leaf) {
		return name_term(node, bound);
	}
	if (node.items.empty()) {
		return mk_unit_type();
	}
	const sexpr_node& head = node.items[0];
	if (head.leaf) {
		const std::string& word = *head.leaf;
		if (word == "pi") {
			return binder_form(node, bound, mk_pi);
		}
		if (word == "sigma") {
			return binder_form(node, bound, mk_sigma);
		}
		if (word == "times") {
			if (node.items.size() != 3) {
				fail(node, "expected (times first second)");
			}
			term_ref first = to_term(node.items[1], bound);
			term_ref second = to_term(node.items[2], bound);
			return mk_sigma("_", first, second);
		}
		if (word == "lam") {
			if (node.items.size() != 3 || !node.items[1].leaf) {
				fail(node, "expected (lam name body)");
			}
			const std::string& name = *node.items[1].leaf;
			if (reserved_heads.count(name)) {
				fail(node.items[1],
				     "reserved word '" + name + "' used as a binder");
			}
			const bool fresh = bound.insert(name).second;
			term_ref body = to_term(node.items[2], bound);
			if (fresh) {
				bound.erase(name);
			}
			return mk_lambda(name, body);
		}
		if (word == "pair") {
			if (node.items.size() != 3) {
				fail(node, "expected (pair first second)");
			}
			return mk_pair(to_term(node.items[1], bound),
			               to_term(node.items[2], bound));
		}
		if (word == "p1" || word == "p2") {
			if (node.items.size() != 2) {
				fail(node, "expected (" + word + " term)");
			}
			term_ref subject = to_term(node.items[1], bound);
			return word == "p1" ? mk_proj1(subject) : mk_proj2(subject);
		}
		if (word == "at") {
			if (node.items.size() != 3 || !node.items[1].leaf) {
				fail(node, "expected (at index type)");
			}
			const std::string& digits = *node.items[1].leaf;
			std::size_t index = 0;
			for (char c : digits) {
				if (!std::isdigit(static_cast<unsigned char>(c))) {
					fail(node.items[1], "anaphora index must be a number");
				}
				index = index * 10 + static_cast<std::size_t>(c - '0');
			}
			if (index == 0) {
				fail(node.items[1], "anaphora indices start at 1");
			}
			return mk_at_op(index, to_term(node.items[2], bound));
		}
	}
	// Application: first item applied to the rest.
	term_ref acc = to_term(node.items[0], bound);
	for (std::size_t i = 1; i < node.items.size(); ++i) {
		acc = mk_application(acc, to_term(node.items[i], bound));
	}
	if (node.items.size() == 1) {
		fail(node, "application needs at least one argument");
	}
	return acc;
}

} // namespace

term_ref parse_term(const std::string& text) {
	tokenizer toks(text);
	tokenizer::token first = toks.next();
	if (first.k == tokenizer::token::kind::end) {
		throw parse_error("empty input", first.line, first.column);
	}
	std::set<std::string> bound;
	sexpr_node node = read_node(toks, first);
	term_ref out = to_term(node, bound);
	tokenizer::token rest = toks.next();
	if (rest.k != tokenizer::token::kind::end) {
		throw parse_error("trailing input after term", rest.line,
		                  rest.column);
	}
	return out;
}

namespace {

void print_into(const term_ref& t, std::ostringstream& out) {
	switch (t->kind) {
	case term_kind::variable:
	case term_kind::constant:
		out << t->name;
		return;
	case term_kind::sort:
		out << (t->sort == sort_kind::type ? "type" : "kind");
		return;
	case term_kind::unit_type:
		out << "()";
		return;
	case term_kind::pi:
	case term_kind::sigma: {
		const bool dependent = free_vars(t->b).count(t->name) != 0;
		if (t->kind == term_kind::sigma && !dependent) {
			out << "(times ";
			print_into(t->a, out);
			out << ' ';
			print_into(t->b, out);
			out << ')';
			return;
		}
		out << (t->kind == term_kind::pi ? "(pi (" : "(sigma (");
		out << t->name << ' ';
		print_into(t->a, out);
		out << ") ";
		print_into(t->b, out);
		out << ')';
		return;
	}
	case term_kind::lambda:
		out << "(lam " << t->name << ' ';
		print_into(t->b, out);
		out << ')';
		return;
	case term_kind::application: {
		spine_view view = spine(t);
		out << '(';
		print_into(view.head, out);
		for (const auto& arg : view.args) {
			out << ' ';
			print_into(arg, out);
		}
		out << ')';
		return;
	}
	case term_kind::pair:
		out << "(pair ";
		print_into(t->a, out);
		out << ' ';
		print_into(t->b, out);
		out << ')';
		return;
	case term_kind::proj1:
	case term_kind::proj2:
		out << (t->kind == term_kind::proj1 ? "(p1 " : "(p2 ");
		print_into(t->a, out);
		out << ')';
		return;
	case term_kind::at_op:
		out << "(at " << t->index << ' ';
		print_into(t->a, out);
		out << ')';
		return;
	}
}

bool display_atomic(const term_ref& t) {
	switch (t->kind) {
	case term_kind::variable:
	case term_kind::constant:
	case term_kind::sort:
	case term_kind::unit_type:
		return true;
	default:
		return false;
	}
}

void display_into(const term_ref& t, std::ostringstream& out) {
	switch (t->kind) {
	case term_kind::variable:
	case term_kind::constant:
		out << t->name;
		return;
	case term_kind::sort:
		out << (t->sort == sort_kind::type ? "type" : "kind");
		return;
	case term_kind::unit_type:
		out << "()";
		return;
	case term_kind::pi: {
		const bool dependent = free_vars(t->b).count(t->name) != 0;
		if (dependent) {
			out << '(' << t->name << " : ";
			display_into(t->a, out);
			out << ')';
		} else if (display_atomic(t->a)) {
			display_into(t->a, out);
		} else {
			out << '(';
			display_into(t->a, out);
			out << ')';
		}
		out << " -> ";
		display_into(t->b, out);
		return;
	}
	case term_kind::sigma: {
		const bool dependent = free_vars(t->b).count(t->name) != 0;
		out << "⟨";
		if (dependent) {
			out << t->name << " : ";
		}
		display_into(t->a, out);
		out << ", ";
		display_into(t->b, out);
		out << "⟩";
		return;
	}
	case term_kind::lambda:
		out << "λ" << t->name << ". ";
		display_into(t->b, out);
		return;
	case term_kind::application: {
		spine_view view = spine(t);
		if (view.head->kind == term_kind::at_op) {
			out << "(@" << view.head->index;
			for (const auto& arg : view.args) {
				out << ' ';
				display_into(arg, out);
			}
			out << " : ";
			display_into(view.head->a, out);
			out << ')';
			return;
		}
		if (display_atomic(view.head)) {
			display_into(view.head, out);
		} else {
			out << '(';
			display_into(view.head, out);
			out << ')';
		}
		out << '(';
		for (std::size_t i = 0; i < view.args.size(); ++i) {
			if (i > 0) {
				out << ", ";
			}
			display_into(view.args[i], out);
		}
		out << ')';
		return;
	}
	case term_kind::pair:
		out << '(';
		display_into(t->a, out);
		out << ", ";
		display_into(t->b, out);
		out << ')';
		return;
	case term_kind::proj1:
	case term_kind::proj2:
		out << (t->kind == term_kind::proj1 ? "π1(" : "π2(");
		display_into(t->a, out);
		out << ')';
		return;
	case term_kind::at_op:
		out << "(@" << t->index << " : ";
		display_into(t->a, out);
		out << ')';
		return;
	}
}

void collect_constant_names(const term_ref& t, std::set<std::string>& out) {
	if (t->kind == term_kind::constant) {
		out.insert(t->name);
	}
	if (t->a) {
		collect_constant_names(t->a, out);
	}
	if (t->b) {
		collect_constant_names(t->b, out);
	}
}

// The printed text resolves a name by whether some binder captures it, so
// a binder that shares its name with a constant in scope (or a reserved
// word) would capture the constant's occurrences on re-parse. Renaming
// such binders keeps printing inside the alpha-class.
term_ref freshen_binders(const term_ref& t,
                         const std::set<std::string>& avoid) {
	switch (t->kind) {
	case term_kind::pi:
	case term_kind::sigma:
	case term_kind::lambda: {
		term_ref domain = t->a ? freshen_binders(t->a, avoid) : nullptr;
		std::string name = t->name;
		term_ref body = t->b;
		if (avoid.count(name) != 0) {
			std::set<std::string> taken = avoid;
			auto fv = free_vars(body);
			taken.insert(fv.begin(), fv.end());
			name = fresh_name(name, taken);
			body = substitute(body, t->name, mk_var(name));
		}
		body = freshen_binders(body, avoid);
		if (t->kind == term_kind::pi) {
			return mk_pi(name, domain, body);
		}
		if (t->kind == term_kind::sigma) {
			return mk_sigma(name, domain, body);
		}
		return mk_lambda(name, body);
	}
	case term_kind::application:
		return mk_application(freshen_binders(t->a, avoid),
		                      freshen_binders(t->b, avoid));
	case term_kind::pair:
		return mk_pair(freshen_binders(t->a, avoid),
		               freshen_binders(t->b, avoid));
	case term_kind::proj1:
		return mk_proj1(freshen_binders(t->a, avoid));
	case term_kind::proj2:
		return mk_proj2(freshen_binders(t->a, avoid));
	case term_kind::at_op:
		return mk_at_op(t->index, freshen_binders(t->a, avoid));
	default:
		return t;
	}
}

term_ref printable(const term_ref& t) {
	std::set<std::string> avoid = reserved_heads;
	collect_constant_names(t, avoid);
	return freshen_binders(t, avoid);
}

} // namespace

std::string print_term(const term_ref& t) {
	std::ostringstream out;
	print_into(printable(t), out);
	return out.str();
}

std::string display_term(const term_ref& t) {
	std::ostringstream out;
	display_into(printable(t), out);
	return out.str();
}

} // namespace dtse
