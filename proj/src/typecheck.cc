#include "dtse/typecheck.h"

#include "dtse/sexpr.h"

namespace dtse {

const char* to_string(type_error_kind kind) {
	switch (kind) {
	case type_error_kind::unbound_variable:
		return "UnboundVariable";
	case type_error_kind::sort_mismatch:
		return "SortMismatch";
	case type_error_kind::not_a_function:
		return "NotAFunction";
	case type_error_kind::not_a_pair:
		return "NotAPair";
	case type_error_kind::mismatch:
		return "Mismatch";
	case type_error_kind::illegal_sort_pair:
		return "IllegalSortPair";
	}
	return "TypeError";
}

namespace {

std::string describe(type_error_kind kind, const std::string& location,
                     const term_ref& subject, const term_ref& expected,
                     const term_ref& found, const std::string& detail) {
	std::string out = to_string(kind);
	if (!location.empty()) {
		out += " at " + location;
	}
	out += ": " + detail;
	if (subject) {
		out += "\n  subject:  " + display_term(subject);
	}
	if (expected) {
		out += "\n  expected: " + display_term(expected);
	}
	if (found) {
		out += "\n  found:    " + display_term(found);
	}
	return out;
}

} // namespace

type_error::type_error(type_error_kind kind, std::string location,
                       term_ref subject, term_ref expected, term_ref found,
                       const std::string& detail)
    : std::runtime_error(
          describe(kind, location, subject, expected, found, detail)),
      error_kind(kind), location(std::move(location)),
      subject(std::move(subject)), expected(std::move(expected)),
      found(std::move(found)) {}

bool promotable_spine(const global_signature& sig, const term_ref& t) {
	spine_view view = spine(t);
	if (view.head->kind == term_kind::at_op) {
		return !view.args.empty();
	}
	if (view.head->kind == term_kind::constant &&
	    is_replace_constant(view.head->name)) {
		const auto* entry = sig.delta_for(view.head->name);
		return entry != nullptr && view.args.size() == entry->arity;
	}
	return false;
}

namespace {

// The formation table of the pair former: every sort combination is
// legal except a kind-sorted first component over a type-sorted second.
bool sigma_sort_pair_allowed(sort_kind first, sort_kind second) {
	return !(first == sort_kind::kind && second == sort_kind::type);
}

class checker {
public:
	checker(const global_signature& sig, const check_options& opts)
	    : sig_(sig), opts_(opts) {}

	term_ref norm(const term_ref& t) const {
		return normalize(sig_, t, opts_.norm);
	}

	term_ref head(const term_ref& t) const {
		return head_normalize(sig_, t, opts_.norm);
	}

	[[noreturn]] void fail(type_error_kind kind, const std::string& loc,
	                       term_ref subject, term_ref expected,
	                       term_ref found, const std::string& detail) const {
		throw type_error(kind, loc, std::move(subject), std::move(expected),
		                 std::move(found), detail);
	}

	static std::string at(const std::string& loc, const char* step) {
		return loc.empty() ? step : loc + "." + step;
	}

	// A left context handed to an anaphora site may be a tuple of
	// previously established material. The tuple itself has no
	// inferable pair type; its leaves must each be well typed.
	void infer_context(const telescope& tel, const term_ref& t,
	                   const std::string& loc) {
		if (t->kind == term_kind::pair) {
			infer_context(tel, t->a, at(loc, "first"));
			infer_context(tel, t->b, at(loc, "second"));
			return;
		}
		infer(tel, t, loc);
	}

	sort_kind infer_sort(const telescope& tel, const term_ref& ty,
	                     const std::string& loc) {
		term_ref classified = infer(tel, ty, loc);
		term_ref classified_head = head(classified);
		if (classified_head->kind == term_kind::sort) {
			return classified_head->sort;
		}
		if (opts_.allow_promotion && promotable_spine(sig_, ty)) {
			// The spine stands for its result type; that result must be
			// an ordinary type.
			if (infer_sort(tel, classified, loc) == sort_kind::type) {
				return sort_kind::type;
			}
		}
		fail(type_error_kind::sort_mismatch, loc, ty, nullptr, classified,
		     "not a type or kind");
	}

	term_ref infer(const telescope& tel, const term_ref& t,
	               const std::string& loc) {
		switch (t->kind) {
		case term_kind::variable: {
			auto ty = tel.lookup(t->name);
			if (!ty) {
				fail(type_error_kind::unbound_variable, loc, t, nullptr,
				     nullptr, "variable '" + t->name + "' is not in scope");
			}
			return norm(*ty);
		}
		case term_kind::constant: {
			auto ty = sig_.lookup(t->name);
			if (!ty) {
				fail(type_error_kind::unbound_variable, loc, t, nullptr,
				     nullptr,
				     "constant '" + t->name + "' is not declared");
			}
			return norm(*ty);
		}
		case term_kind::sort:
			if (t->sort == sort_kind::kind) {
				fail(type_error_kind::sort_mismatch, loc, t, nullptr,
				     nullptr, "kind has no classifier");
			}
			return mk_sort(sort_kind::kind);
		case term_kind::unit_type:
			return mk_sort(sort_kind::type);
		case term_kind::pi: {
			this->infer_sort(tel, t->a, at(loc, "domain"));
			telescope inner =
			    tel.extended(t->name, promote(tel, t->a, loc));
			sort_kind s2 =
			    this->infer_sort(inner, t->b, at(loc, "codomain"));
			return mk_sort(s2);
		}
		case term_kind::sigma: {
			sort_kind s1 = this->infer_sort(tel, t->a, at(loc, "first"));
			telescope inner =
			    tel.extended(t->name, promote(tel, t->a, loc));
			sort_kind s2 =
			    this->infer_sort(inner, t->b, at(loc, "second"));
			if (!sigma_sort_pair_allowed(s1, s2)) {
				fail(type_error_kind::illegal_sort_pair, loc, t, nullptr,
				     nullptr,
				     "pair types cannot quantify a kind over a type");
			}
			return mk_sort(s2);
		}
		case term_kind::lambda:
			fail(type_error_kind::mismatch, loc, t, nullptr, nullptr,
			     "bare function; check it against a function space");
		case term_kind::pair:
			fail(type_error_kind::mismatch, loc, t, nullptr, nullptr,
			     "bare pair; check it against a pair type");
		case term_kind::application: {
			if (t->a->kind == term_kind::at_op) {
				// An applied anaphora site has exactly its ascribed type,
				// whatever the left context supplied.
				infer_context(tel, t->b, at(loc, "arg"));
				this->infer_sort(tel, t->a->a, at(loc, "fn"));
				return norm(t->a->a);
			}
			term_ref fn_ty = head(infer(tel, t->a, at(loc, "fn")));
			if (fn_ty->kind != term_kind::pi) {
				fail(type_error_kind::not_a_function, loc, t, nullptr,
				     fn_ty, "application of a non-function");
			}
			check(tel, t->b, fn_ty->a, at(loc, "arg"));
			return norm(substitute(fn_ty->b, fn_ty->name, t->b));
		}
		case term_kind::proj1:
		case term_kind::proj2: {
			term_ref pair_ty = head(infer(tel, t->a, at(loc, "subject")));
			if (pair_ty->kind != term_kind::sigma) {
				fail(type_error_kind::not_a_pair, loc, t, nullptr, pair_ty,
				     "projection from a non-pair");
			}
			if (t->kind == term_kind::proj1) {
				return norm(pair_ty->a);
			}
			return norm(substitute(pair_ty->b, pair_ty->name,
			                       mk_proj1(t->a)));
		}
		case term_kind::at_op:
			fail(type_error_kind::mismatch, loc, t, nullptr, nullptr,
			     "anaphora site not applied to a context");
		}
		fail(type_error_kind::mismatch, loc, t, nullptr, nullptr,
		     "unclassifiable term");
	}

	check_result check(const telescope& tel, const term_ref& t,
	                   const term_ref& expected, const std::string& loc) {
		term_ref want = norm(expected);

		if (t->kind == term_kind::lambda) {
			if (want->kind != term_kind::pi) {
				fail(type_error_kind::mismatch, loc, t, want, nullptr,
				     "function against a non-function type");
			}
			std::string binder = t->name;
			term_ref cod = want->b;
			if (binder != want->name) {
				if (free_vars(cod).count(binder)) {
					std::set<std::string> avoid = free_vars(cod);
					auto fv_body = free_vars(t->b);
					avoid.insert(fv_body.begin(), fv_body.end());
					binder = fresh_name(binder, avoid);
				}
				cod = substitute(cod, want->name, mk_var(binder));
			}
			term_ref body = binder == t->name
			                    ? t->b
			                    : substitute(t->b, t->name, mk_var(binder));
			telescope inner =
			    tel.extended(binder, promote(tel, want->a, loc));
			check_result body_result =
			    check(inner, body, cod, at(loc, "body"));
			return {mk_lambda(binder, body_result.elaborated),
			        std::nullopt};
		}

		if (t->kind == term_kind::pair) {
			if (want->kind == term_kind::sigma) {
				check_result first =
				    check(tel, t->a, want->a, at(loc, "first"));
				term_ref second_ty =
				    norm(substitute(want->b, want->name, t->a));
				check_result second =
				    check(tel, t->b, second_ty, at(loc, "second"));
				return {mk_pair(first.elaborated, second.elaborated),
				        std::nullopt};
			}
			fail(type_error_kind::mismatch, loc, t, want, nullptr,
			     "pair against a non-pair type");
		}

		if (want->kind == term_kind::sort) {
			sort_kind s = infer_sort(tel, t, loc);
			if (s != want->sort) {
				fail(type_error_kind::sort_mismatch, loc, t, want,
				     mk_sort(s), "sort disagreement");
			}
			return {t, std::nullopt};
		}

		term_ref found = infer(tel, t, loc);
		if (alpha_eq(found, want)) {
			return {t, std::nullopt};
		}

		if (opts_.use_subtyping) {
			if (auto co = is_subtype(sig_, found, want)) {
				return {mk_application(co->witness, t), co};
			}
			if (opts_.allow_promotion) {
				// A term that is itself a type may stand where a wider
				// type is expected; the inhabitant is kept as written and
				// the widening recorded.
				if (auto promoted = try_promote_as_type(tel, t, loc)) {
					if (alpha_eq(*promoted, want)) {
						return {t, std::nullopt};
					}
					if (auto co = is_subtype(sig_, *promoted, want)) {
						return {t, co};
					}
				}
			}
		}

		fail(type_error_kind::mismatch, loc, t, want, found,
		     "type disagreement");
	}

	// The promoted reading of t when t is a well-formed type of sort
	// `type`; nullopt when t is not a type at all.
	std::optional<term_ref> try_promote_as_type(const telescope& tel,
	                                            const term_ref& t,
	                                            const std::string& loc) {
		switch (t->kind) {
		case term_kind::sigma:
		case term_kind::pi:
		case term_kind::application:
		case term_kind::unit_type:
			break;
		default:
			return std::nullopt;
		}
		try {
			if (infer_sort(tel, t, loc) != sort_kind::type) {
				return std::nullopt;
			}
		} catch (const type_error&) {
			return std::nullopt;
		}
		return promote(tel, t, loc);
	}

	// deep_promote over a type expression.
	term_ref promote(const telescope& tel, const term_ref& ty,
	                 const std::string& loc) {
		if (!opts_.allow_promotion) {
			return ty;
		}
		if (promotable_spine(sig_, ty)) {
			term_ref result = infer(tel, ty, loc);
			// The result type may again contain promotable material.
			return promote(tel, result, loc);
		}
		switch (ty->kind) {
		case term_kind::pi:
		case term_kind::sigma: {
			term_ref first = promote(tel, ty->a, loc);
			telescope inner = tel.extended(ty->name, first);
			term_ref second = promote(inner, ty->b, loc);
			if (first.get() == ty->a.get() && second.get() == ty->b.get()) {
				return ty;
			}
			return ty->kind == term_kind::pi
			           ? mk_pi(ty->name, first, second)
			           : mk_sigma(ty->name, first, second);
		}
		default:
			return ty;
		}
	}

private:
	const global_signature& sig_;
	const check_options& opts_;
};

} // namespace

sort_kind infer_sort(const global_signature& sig, const telescope& tel,
                     const term_ref& type, const check_options& opts) {
	checker ck(sig, opts);
	return ck.infer_sort(tel, type, "");
}

term_ref infer_type(const global_signature& sig, const telescope& tel,
                    const term_ref& t, const check_options& opts) {
	checker ck(sig, opts);
	return ck.infer(tel, t, "");
}

check_result check_type(const global_signature& sig, const telescope& tel,
                        const term_ref& t, const term_ref& expected,
                        const check_options& opts) {
	checker ck(sig, opts);
	return ck.check(tel, t, expected, "");
}

term_ref deep_promote(const global_signature& sig, const telescope& tel,
                      const term_ref& type, const check_options& opts) {
	checker ck(sig, opts);
	return ck.promote(tel, type, "");
}

} // namespace dtse
