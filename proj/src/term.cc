#include "dtse/term.h"

#include <algorithm>
#include <cassert>

namespace dtse {

namespace {

term_ref make(term&& t) {
	return std::make_shared<const term>(std::move(t));
}

bool is_binder(term_kind k) {
	return k == term_kind::pi || k == term_kind::sigma ||
	       k == term_kind::lambda;
}

} // namespace

term_ref mk_var(std::string name) {
	term t;
	t.kind = term_kind::variable;
	t.name = std::move(name);
	return make(std::move(t));
}

term_ref mk_const(std::string name) {
	term t;
	t.kind = term_kind::constant;
	t.name = std::move(name);
	return make(std::move(t));
}

term_ref mk_sort(sort_kind s) {
	term t;
	t.kind = term_kind::sort;
	t.sort = s;
	return make(std::move(t));
}

term_ref mk_pi(std::string binder, term_ref domain, term_ref codomain) {
	assert(domain && codomain);
	term t;
	t.kind = term_kind::pi;
	t.name = std::move(binder);
	t.a = std::move(domain);
	t.b = std::move(codomain);
	return make(std::move(t));
}

term_ref mk_sigma(std::string binder, term_ref first, term_ref second) {
	assert(first && second);
	term t;
	t.kind = term_kind::sigma;
	t.name = std::move(binder);
	t.a = std::move(first);
	t.b = std::move(second);
	return make(std::move(t));
}

term_ref mk_lambda(std::string binder, term_ref body) {
	assert(body);
	term t;
	t.kind = term_kind::lambda;
	t.name = std::move(binder);
	t.b = std::move(body);
	return make(std::move(t));
}

term_ref mk_application(term_ref fn, term_ref arg) {
	assert(fn && arg);
	term t;
	t.kind = term_kind::application;
	t.a = std::move(fn);
	t.b = std::move(arg);
	return make(std::move(t));
}

term_ref mk_applications(term_ref fn, const std::vector<term_ref>& args) {
	term_ref acc = std::move(fn);
	for (const auto& arg : args) {
		acc = mk_application(acc, arg);
	}
	return acc;
}

term_ref mk_pair(term_ref first, term_ref second) {
	assert(first && second);
	term t;
	t.kind = term_kind::pair;
	t.a = std::move(first);
	t.b = std::move(second);
	return make(std::move(t));
}

term_ref mk_proj1(term_ref subject) {
	assert(subject);
	term t;
	t.kind = term_kind::proj1;
	t.a = std::move(subject);
	return make(std::move(t));
}

term_ref mk_proj2(term_ref subject) {
	assert(subject);
	term t;
	t.kind = term_kind::proj2;
	t.a = std::move(subject);
	return make(std::move(t));
}

term_ref mk_at_op(std::size_t index, term_ref ascription) {
	assert(ascription);
	term t;
	t.kind = term_kind::at_op;
	t.index = index;
	t.a = std::move(ascription);
	return make(std::move(t));
}

term_ref mk_unit_type() {
	term t;
	t.kind = term_kind::unit_type;
	return make(std::move(t));
}

namespace {

void free_vars_into(const term_ref& t, std::set<std::string>& bound,
                    std::set<std::string>& out) {
	switch (t->kind) {
	case term_kind::variable:
		if (!bound.count(t->name)) {
			out.insert(t->name);
		}
		return;
	case term_kind::constant:
	case term_kind::sort:
	case term_kind::unit_type:
		return;
	case term_kind::pi:
	case term_kind::sigma: {
		free_vars_into(t->a, bound, out);
		const bool fresh = bound.insert(t->name).second;
		free_vars_into(t->b, bound, out);
		if (fresh) {
			bound.erase(t->name);
		}
		return;
	}
	case term_kind::lambda: {
		const bool fresh = bound.insert(t->name).second;
		free_vars_into(t->b, bound, out);
		if (fresh) {
			bound.erase(t->name);
		}
		return;
	}
	case term_kind::application:
	case term_kind::pair:
		free_vars_into(t->a, bound, out);
		free_vars_into(t->b, bound, out);
		return;
	case term_kind::proj1:
	case term_kind::proj2:
	case term_kind::at_op:
		free_vars_into(t->a, bound, out);
		return;
	}
}

} // namespace

std::set<std::string> free_vars(const term_ref& t) {
	std::set<std::string> bound;
	std::set<std::string> out;
	free_vars_into(t, bound, out);
	return out;
}

std::string fresh_name(const std::string& base,
                       const std::set<std::string>& taken) {
	std::string candidate = base;
	while (taken.count(candidate)) {
		candidate += '\'';
	}
	return candidate;
}

namespace {

term_ref subst(const term_ref& t, const std::string& name,
               const term_ref& replacement,
               const std::set<std::string>& fv_replacement) {
	switch (t->kind) {
	case term_kind::variable:
		return t->name == name ? replacement : t;
	case term_kind::constant:
	case term_kind::sort:
	case term_kind::unit_type:
		return t;
	case term_kind::pi:
	case term_kind::sigma:
	case term_kind::lambda: {
		term_ref part_a =
		    t->a ? subst(t->a, name, replacement, fv_replacement) : nullptr;
		if (t->name == name) {
			// Binder shadows the substituted name; body untouched.
			if (t->kind == term_kind::lambda) {
				return t;
			}
			if (part_a == t->a) {
				return t;
			}
			term copy = *t;
			copy.a = part_a;
			return std::make_shared<const term>(std::move(copy));
		}
		std::string binder = t->name;
		term_ref body = t->b;
		if (fv_replacement.count(binder)) {
			// Rename the binder so the replacement's free names survive.
			std::set<std::string> avoid = fv_replacement;
			auto fv_body = free_vars(body);
			avoid.insert(fv_body.begin(), fv_body.end());
			avoid.insert(name);
			binder = fresh_name(binder, avoid);
			body = substitute(body, t->name, mk_var(binder));
		}
		body = subst(body, name, replacement, fv_replacement);
		term copy = *t;
		copy.name = std::move(binder);
		copy.a = part_a;
		copy.b = body;
		return std::make_shared<const term>(std::move(copy));
	}
	case term_kind::application:
	case term_kind::pair: {
		term copy = *t;
		copy.a = subst(t->a, name, replacement, fv_replacement);
		copy.b = subst(t->b, name, replacement, fv_replacement);
		return std::make_shared<const term>(std::move(copy));
	}
	case term_kind::proj1:
	case term_kind::proj2:
	case term_kind::at_op: {
		term copy = *t;
		copy.a = subst(t->a, name, replacement, fv_replacement);
		return std::make_shared<const term>(std::move(copy));
	}
	}
	return t;
}

} // namespace

term_ref substitute(const term_ref& body, const std::string& name,
                    const term_ref& replacement) {
	return subst(body, name, replacement, free_vars(replacement));
}

namespace {

// Bound names are translated to de Bruijn-style levels on both sides; free
// names must match literally.
bool aeq(const term_ref& x, const term_ref& y,
         std::vector<std::pair<std::string, std::string>>& scopes) {
	if (x.get() == y.get() && scopes.empty()) {
		return true;
	}
	if (x->kind != y->kind) {
		return false;
	}
	switch (x->kind) {
	case term_kind::variable: {
		for (auto it = scopes.rbegin(); it != scopes.rend(); ++it) {
			const bool hit_x = it->first == x->name;
			const bool hit_y = it->second == y->name;
			if (hit_x || hit_y) {
				return hit_x && hit_y;
			}
		}
		return x->name == y->name;
	}
	case term_kind::constant:
		return x->name == y->name;
	case term_kind::sort:
		return x->sort == y->sort;
	case term_kind::unit_type:
		return true;
	case term_kind::pi:
	case term_kind::sigma: {
		if (!aeq(x->a, y->a, scopes)) {
			return false;
		}
		scopes.emplace_back(x->name, y->name);
		const bool ok = aeq(x->b, y->b, scopes);
		scopes.pop_back();
		return ok;
	}
	case term_kind::lambda: {
		scopes.emplace_back(x->name, y->name);
		const bool ok = aeq(x->b, y->b, scopes);
		scopes.pop_back();
		return ok;
	}
	case term_kind::application:
	case term_kind::pair:
		return aeq(x->a, y->a, scopes) && aeq(x->b, y->b, scopes);
	case term_kind::proj1:
	case term_kind::proj2:
		return aeq(x->a, y->a, scopes);
	case term_kind::at_op:
		return x->index == y->index && aeq(x->a, y->a, scopes);
	}
	return false;
}

} // namespace

bool alpha_eq(const term_ref& lhs, const term_ref& rhs) {
	std::vector<std::pair<std::string, std::string>> scopes;
	return aeq(lhs, rhs, scopes);
}

bool contains_subterm(const term_ref& t, const term_ref& needle) {
	if (alpha_eq(t, needle)) {
		return true;
	}
	if (t->a && contains_subterm(t->a, needle)) {
		return true;
	}
	if (t->b && contains_subterm(t->b, needle)) {
		return true;
	}
	return false;
}

term_ref replace_subterm(const term_ref& t, const term_ref& needle,
                         const term_ref& replacement) {
	if (alpha_eq(t, needle)) {
		return replacement;
	}
	term copy = *t;
	bool changed = false;
	if (t->a) {
		copy.a = replace_subterm(t->a, needle, replacement);
		changed = changed || copy.a.get() != t->a.get();
	}
	if (t->b) {
		copy.b = replace_subterm(t->b, needle, replacement);
		changed = changed || copy.b.get() != t->b.get();
	}
	if (!changed) {
		return t;
	}
	return std::make_shared<const term>(std::move(copy));
}

spine_view spine(const term_ref& t) {
	spine_view view;
	term_ref cursor = t;
	while (cursor->kind == term_kind::application) {
		view.args.push_back(cursor->b);
		cursor = cursor->a;
	}
	view.head = cursor;
	std::reverse(view.args.begin(), view.args.end());
	return view;
}

} // namespace dtse
