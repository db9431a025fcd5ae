#include <doctest.h>

#include <functional>
#include <string>
#include <vector>

#include "dtse/fol.h"
#include "dtse/fragment.h"
#include "dtse/term.h"

#include "generators.h"

using namespace dtse;

namespace {

term_ref p1(const char* head, term_ref a) {
	return mk_application(mk_const(head), std::move(a));
}

term_ref p2(const char* head, term_ref a, term_ref b) {
	return mk_applications(mk_const(head), {std::move(a), std::move(b)});
}

term_ref event_chain(const char* nature, const char* who) {
	return mk_sigma("e", mk_const("event"),
	                mk_sigma("_", p1(nature, mk_var("e")),
	                         p2("agent", mk_var("e"), mk_const(who))));
}

} // namespace

TEST_CASE("flattening reassociates packs and drops unit binders") {
	global_signature sig = fragment_signature();

	term_ref man =
	    mk_sigma("x", mk_const("entity"), p1("man", mk_var("x")));
	term_ref packed =
	    mk_sigma("u", man, p1("slow", mk_proj1(mk_var("u"))));
	term_ref flat = flatten_interpretation(sig, packed);
	term_ref expect =
	    mk_sigma("x", mk_const("entity"),
	             mk_sigma("z", p1("man", mk_var("x")),
	                      p1("slow", mk_var("x"))));
	CHECK(alpha_eq(flat, expect));
	// Flattening is idempotent.
	CHECK(alpha_eq(flatten_interpretation(sig, flat), flat));

	term_ref unital =
	    mk_sigma("v", mk_unit_type(),
	             mk_sigma("e", mk_const("event"), p1("left", mk_var("e"))));
	CHECK(alpha_eq(flatten_interpretation(sig, unital),
	               mk_sigma("e", mk_const("event"),
	                        p1("left", mk_var("e")))));

	// A two-level pack flattens into one telescope.
	term_ref stacked =
	    mk_sigma("u", event_chain("left", "j"),
	             p2("before", mk_proj1(mk_var("u")), mk_const("ev9")));
	term_ref flat2 = flatten_interpretation(sig, stacked);
	term_ref expect2 = mk_sigma(
	    "e", mk_const("event"),
	    mk_sigma("h", p1("left", mk_var("e")),
	             mk_sigma("u", p2("agent", mk_var("e"), mk_const("j")),
	                      p2("before", mk_var("e"), mk_const("ev9")))));
	CHECK(alpha_eq(flat2, expect2));
}

TEST_CASE("event descriptions translate to existential formulas") {
	global_signature sig = fragment_signature();

	fol_ref f = to_fol(
	    sig, mk_sigma("e''", mk_const("event"),
	                  mk_sigma("_", p1("left", mk_var("e''")),
	                           p2("agent", mk_var("e''"),
	                              mk_const("m")))));
	CHECK(fol_to_string(f) == "∃e''. left(e'') ∧ agent(e'', m)");
	CHECK(count_exists(f) == 1);

	// A trivial body prints as a bare quantifier.
	fol_ref bare =
	    to_fol(sig, mk_sigma("e", mk_const("event"), mk_unit_type()));
	CHECK(fol_to_string(bare) == "∃e");

	// Shadowed binders pick fresh display names.
	fol_ref shadow = to_fol(
	    sig, mk_sigma("e", mk_const("event"),
	                  mk_sigma("e", mk_const("event"),
	                           p1("left", mk_var("e")))));
	CHECK(fol_to_string(shadow) == "∃e. ∃e'. left(e')");
}

TEST_CASE("the event-patient relation displays as plain patient") {
	global_signature sig = fragment_signature();
	fol_ref f = to_fol(
	    sig, mk_sigma("e", mk_const("event"),
	                  mk_sigma("e'", mk_const("event"),
	                           p2("patientp", mk_var("e"),
	                              mk_var("e'")))));
	CHECK(fol_to_string(f) == "∃e. ∃e'. patient(e, e')");
}

TEST_CASE("function types translate to universals and implications") {
	global_signature sig = fragment_signature();

	fol_ref all = to_fol(
	    sig, mk_pi("x", mk_const("entity"), p1("male", mk_var("x"))));
	CHECK(fol_to_string(all) == "∀x. male(x)");

	fol_ref impl = to_fol(
	    sig, mk_pi("_", p1("male", mk_const("j")),
	               p1("female", mk_const("m"))));
	CHECK(fol_to_string(impl) == "¬(male(j) ∧ ¬female(m))");
}

TEST_CASE("terms outside the first-order fragment are rejected") {
	global_signature sig = fragment_signature();

	CHECK_THROWS_AS(to_fol(sig, mk_lambda("x", mk_var("x"))),
	                untranslatable);

	// A predicate argument with structure has no first-order name.
	CHECK_THROWS_AS(
	    to_fol(sig, mk_sigma("e", mk_const("event"),
	                         p2("agent", mk_var("e"),
	                            mk_lambda("x", mk_var("x"))))),
	    untranslatable);

	// A proof of a proposition used later cannot be quantified away.
	term_ref dependent =
	    mk_sigma("u", p2("agent", mk_const("ev0"), mk_const("j")),
	             p2("patientp", mk_const("ev0"), mk_var("u")));
	try {
		to_fol(sig, dependent);
		FAIL("expected the translation to fail");
	} catch (const untranslatable& e) {
		CHECK(e.subject != nullptr);
	}

	// Same for hypotheses of implications.
	CHECK_THROWS_AS(
	    to_fol(sig, mk_pi("u", p1("male", mk_const("j")),
	                      p2("patientp", mk_const("ev0"), mk_var("u")))),
	    untranslatable);
}

TEST_CASE("formulas print and parse back unchanged") {
	std::vector<fol_ref> samples = {
	    fol_pred("left", {"e1"}),
	    fol_pred("true", {}),
	    fol_exists("e", fol_sort::event, fol_true()),
	    fol_exists("e", fol_sort::event,
	               fol_and(fol_pred("left", {"e"}),
	                       fol_pred("agent", {"e", "j"}))),
	    fol_and(fol_exists("e", fol_sort::event, fol_pred("left", {"e"})),
	            fol_pred("male", {"j"})),
	    fol_not(fol_pred("male", {"j"})),
	    fol_not(fol_and(fol_pred("male", {"j"}),
	                    fol_not(fol_pred("female", {"m"})))),
	    fol_forall("x1", fol_sort::entity,
	               fol_exists("e1", fol_sort::event,
	                          fol_pred("agent", {"e1", "x1"}))),
	    fol_exists(
	        "x", fol_sort::entity,
	        fol_and(fol_pred("hat", {"x"}),
	                fol_and(fol_pred("owner", {"x", "j"}),
	                        fol_exists("e'", fol_sort::event,
	                                   fol_pred("patient",
	                                            {"e'", "x"}))))),
	};
	for (const auto& f : samples) {
		const std::string printed = fol_to_string(f);
		CHECK(fol_eq(fol_parse(printed), f));
		CHECK(fol_to_string(fol_parse(printed)) == printed);
	}

	// Randomized round trips over canonical-style names.
	testgen::rng r{2026};
	for (int i = 0; i < 300; ++i) {
		std::vector<std::string> open;
		std::function<fol_ref(int)> build = [&](int depth) -> fol_ref {
			if (depth == 0 || r.below(4) == 0) {
				if (open.empty() || r.coin()) {
					return fol_pred(r.coin() ? "male" : "left",
					                {r.coin() ? "j" : "m"});
				}
				std::vector<std::string> args = {
				    open[r.below(open.size())]};
				if (r.coin()) {
					args.push_back(open[r.below(open.size())]);
				}
				return fol_pred("rel", args);
			}
			switch (r.below(4)) {
			case 0: {
				const bool event = r.coin();
				const std::string v =
				    (event ? "e" : "x") + std::to_string(open.size() + 1);
				open.push_back(v);
				fol_ref body = build(depth - 1);
				open.pop_back();
				return fol_exists(
				    v, event ? fol_sort::event : fol_sort::entity, body);
			}
			case 1: {
				const bool event = r.coin();
				const std::string v =
				    (event ? "e" : "x") + std::to_string(open.size() + 1);
				open.push_back(v);
				fol_ref body = build(depth - 1);
				open.pop_back();
				return fol_forall(
				    v, event ? fol_sort::event : fol_sort::entity, body);
			}
			case 2: {
				// The printer flattens nested conjunctions, so keep
				// the left operand conjunction-free for the round trip.
				fol_ref left =
				    r.coin() ? fol_pred("male", {"j"})
				             : fol_exists("e" + std::to_string(
				                                    open.size() + 9),
				                          fol_sort::event, fol_true());
				return fol_and(left, build(depth - 1));
			}
			default:
				return fol_not(build(depth - 1));
			}
		};
		fol_ref f = build(3);
		CHECK(fol_eq(fol_parse(fol_to_string(f)), f));
	}

	CHECK_THROWS_AS(fol_parse("∃e. left(e"), std::runtime_error);
	CHECK_THROWS_AS(fol_parse(""), std::runtime_error);
	CHECK_THROWS_AS(fol_parse("male(j) extra"), std::runtime_error);
}

TEST_CASE("equivalence ignores conjunct order and binder spelling") {
	fol_ref a = fol_parse("∃e. left(e) ∧ agent(e, j) ∧ at(e, ln)");
	fol_ref b = fol_parse("∃e. at(e, ln) ∧ left(e) ∧ agent(e, j)");
	fol_ref c = fol_parse("∃e''. left(e'') ∧ agent(e'', j) ∧ at(e'', ln)");
	CHECK(fol_equivalent(a, b));
	CHECK(fol_equivalent(a, c));
	CHECK_FALSE(fol_eq(a, c));

	fol_ref other = fol_parse("∃e. left(e) ∧ agent(e, m) ∧ at(e, ln)");
	CHECK_FALSE(fol_equivalent(a, other));

	fol_ref fewer = fol_parse("∃e. left(e) ∧ agent(e, j)");
	CHECK_FALSE(fol_equivalent(a, fewer));

	// The neutral conjunct disappears under canonicalization.
	CHECK(fol_equivalent(fol_and(fol_true(), fol_pred("male", {"j"})),
	                     fol_pred("male", {"j"})));

	// Sorts are part of identity: an entity binder never matches an
	// event binder.
	CHECK_FALSE(fol_equivalent(fol_parse("∃e. thing(e)"),
	                           fol_parse("∃x. thing(x)")));

	// Canonical renaming is stable regardless of source names.
	fol_ref renamed = canonical_fol(c);
	CHECK(fol_to_string(renamed) ==
	      fol_to_string(canonical_fol(a)));
	CHECK(fol_to_string(renamed).find("e1") != std::string::npos);
}

TEST_CASE("quantifier counting sees through the whole formula") {
	CHECK(count_exists(fol_parse("male(j)")) == 0);
	CHECK(count_exists(fol_parse(
	          "∃x. hat(x) ∧ owner(x, j) ∧ ∃e. like(e) ∧ agent(e, j) ∧ "
	          "∃e'. like(e') ∧ agent(e', f)")) == 3);
	CHECK(count_exists(fol_parse("∀x. ∃e. agent(e, x)")) == 1);
	CHECK(count_exists(fol_parse("¬(∃e. left(e))")) == 1);
}

TEST_CASE("a resolved two-sentence reading exports end to end") {
	global_signature sig = fragment_signature();
	term_ref reading = mk_sigma("u", event_chain("left", "j"),
	                            event_chain("left", "m"));
	fol_ref f = to_fol(sig, reading);
	CHECK(fol_equivalent(
	    f, fol_parse(
	           "∃e. left(e) ∧ agent(e, j) ∧ ∃e'. left(e') ∧ "
	           "agent(e', m)")));
}
