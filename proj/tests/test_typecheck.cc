#include <doctest.h>

#include "dtse/fragment.h"
#include "dtse/signature.h"
#include "dtse/term.h"
#include "dtse/typecheck.h"

#include "generators.h"
#include "property_suites.h"

using namespace dtse;

namespace {

global_signature test_signature() {
	global_signature sig = fragment_signature();
	extend_signature(sig, builtin_lexicon());
	sig.declare("ev0", mk_const("event"));
	sig.declare("lft0", mk_application(mk_const("left"),
	                                   mk_const("ev0")));
	sig.declare("agj0", mk_applications(mk_const("agent"),
	                                    {mk_const("ev0"),
	                                     mk_const("j")}));
	return sig;
}

const term_ref ty = mk_sort(sort_kind::type);
const term_ref entity = mk_const("entity");

} // namespace

TEST_CASE("function types form at every sort combination") {
	global_signature sig = test_signature();
	telescope tel;

	// (type, type)
	CHECK(infer_sort(sig, tel, mk_pi("x", entity, entity)) ==
	      sort_kind::type);
	// (type, kind)
	CHECK(infer_sort(sig, tel, mk_pi("x", entity, ty)) ==
	      sort_kind::kind);
	// (kind, type)
	CHECK(infer_sort(sig, tel, mk_pi("a", ty, entity)) ==
	      sort_kind::type);
	// (kind, kind)
	CHECK(infer_sort(sig, tel, mk_pi("a", ty, ty)) == sort_kind::kind);

	// Dependent use of a kind-sorted binder.
	CHECK(infer_sort(sig, tel, mk_pi("a", ty, mk_var("a"))) ==
	      sort_kind::type);
}

TEST_CASE("pair types reject a kind over a type and allow the rest") {
	global_signature sig = test_signature();
	telescope tel;

	CHECK(infer_sort(sig, tel, mk_sigma("x", entity, entity)) ==
	      sort_kind::type);
	CHECK(infer_sort(sig, tel, mk_sigma("x", entity, ty)) ==
	      sort_kind::kind);
	CHECK(infer_sort(sig, tel, mk_sigma("a", ty, ty)) ==
	      sort_kind::kind);

	try {
		infer_sort(sig, tel, mk_sigma("a", ty, entity));
		FAIL("expected the illegal sort pair to be rejected");
	} catch (const type_error& e) {
		CHECK(e.error_kind == type_error_kind::illegal_sort_pair);
	}

	// The same check fires nested inside a bigger type.
	CHECK_THROWS_AS(
	    infer_sort(sig, tel,
	               mk_pi("x", entity, mk_sigma("a", ty, entity))),
	    type_error);
}

TEST_CASE("inference on constants, applications, and projections") {
	global_signature sig = test_signature();
	telescope tel;

	CHECK(alpha_eq(infer_type(sig, tel, mk_const("j")), entity));
	CHECK(alpha_eq(infer_type(sig, tel, mk_const("ev0")),
	               mk_const("event")));

	term_ref app = mk_applications(mk_const("agent"),
	                               {mk_const("ev0"), mk_const("j")});
	CHECK(alpha_eq(infer_type(sig, tel, app), ty));

	// Projections from a declared dependent pair.
	global_signature sig2 = sig;
	sig2.declare("u0",
	             mk_sigma("e", mk_const("event"),
	                      mk_application(mk_const("left"), mk_var("e"))));
	CHECK(alpha_eq(infer_type(sig2, tel, mk_proj1(mk_const("u0"))),
	               mk_const("event")));
	CHECK(alpha_eq(infer_type(sig2, tel, mk_proj2(mk_const("u0"))),
	               mk_application(mk_const("left"),
	                              mk_proj1(mk_const("u0")))));
}

TEST_CASE("inference failures carry their kind") {
	global_signature sig = test_signature();
	telescope tel;

	try {
		infer_type(sig, tel, mk_var("ghost"));
		FAIL("unbound variable accepted");
	} catch (const type_error& e) {
		CHECK(e.error_kind == type_error_kind::unbound_variable);
	}

	try {
		infer_type(sig, tel,
		           mk_application(mk_const("j"), mk_const("m")));
		FAIL("application of a non-function accepted");
	} catch (const type_error& e) {
		CHECK(e.error_kind == type_error_kind::not_a_function);
	}

	try {
		infer_type(sig, tel, mk_proj1(mk_const("j")));
		FAIL("projection from a non-pair accepted");
	} catch (const type_error& e) {
		CHECK(e.error_kind == type_error_kind::not_a_pair);
	}

	// Functions and pairs have no inferable type of their own.
	CHECK_THROWS_AS(infer_type(sig, tel, mk_lambda("x", mk_var("x"))),
	                type_error);
	CHECK_THROWS_AS(
	    infer_type(sig, tel, mk_pair(mk_const("j"), mk_const("m"))),
	    type_error);

	// An unapplied anaphora site cannot be classified.
	CHECK_THROWS_AS(infer_type(sig, tel, mk_at_op(1, entity)),
	                type_error);
}

TEST_CASE("checking functions and dependent pairs") {
	global_signature sig = test_signature();
	telescope tel;

	check_type(sig, tel, mk_lambda("x", mk_var("x")),
	           mk_pi("x", entity, entity));

	// Dependent pair: the second component's type mentions the first.
	term_ref female_pack =
	    mk_sigma("x", entity,
	             mk_application(mk_const("female"), mk_var("x")));
	check_type(sig, tel, mk_pair(mk_const("m"), mk_const("mf")),
	           female_pack);

	// Wrong witness for the property.
	CHECK_THROWS_AS(
	    check_type(sig, tel, mk_pair(mk_const("j"), mk_const("mf")),
	               female_pack),
	    type_error);

	// A function checked against a pair type fails immediately.
	CHECK_THROWS_AS(check_type(sig, tel, mk_lambda("x", mk_var("x")),
	                           female_pack),
	                type_error);
}

TEST_CASE("a redex headed by a literal function neither infers nor checks") {
	global_signature sig = test_signature();
	telescope tel;
	term_ref redex = mk_application(mk_lambda("x", mk_var("x")),
	                                mk_const("j"));
	CHECK_THROWS_AS(infer_type(sig, tel, redex), type_error);
	CHECK_THROWS_AS(check_type(sig, tel, redex, entity), type_error);
}

TEST_CASE("applied anaphora sites take their ascribed type") {
	global_signature sig = test_signature();
	telescope tel;

	term_ref asc = mk_sigma("e", mk_const("event"),
	                        mk_application(mk_const("left"),
	                                       mk_var("e")));
	term_ref site = mk_application(mk_at_op(1, asc), mk_const("unit"));
	CHECK(alpha_eq(infer_type(sig, tel, site), asc));

	// A tuple context is validated leafwise even though bare tuples
	// have no inferable type.
	term_ref tuple_site = mk_application(
	    mk_at_op(2, asc),
	    mk_pair(mk_const("unit"),
	            mk_pair(mk_const("m"), mk_const("mf"))));
	CHECK(alpha_eq(infer_type(sig, tel, tuple_site), asc));

	// A broken leaf still fails.
	CHECK_THROWS_AS(
	    infer_type(sig, tel,
	               mk_application(mk_at_op(3, asc),
	                              mk_pair(mk_const("unit"),
	                                      mk_var("ghost")))),
	    type_error);
}

TEST_CASE("type-valued spines stand for their result types") {
	global_signature sig = test_signature();
	telescope tel;

	term_ref asc = mk_sigma("e", mk_const("event"),
	                        mk_application(mk_const("left"),
	                                       mk_var("e")));
	term_ref site = mk_application(mk_at_op(1, asc), mk_const("unit"));

	// With promotion, the applied site is usable as a proposition.
	CHECK(infer_sort(sig, tel, site) == sort_kind::type);
	CHECK(promotable_spine(sig, site));
	CHECK(alpha_eq(deep_promote(sig, tel, site), asc));

	check_options no_promo;
	no_promo.allow_promotion = false;
	CHECK_THROWS_AS(infer_sort(sig, tel, site, no_promo), type_error);

	// A saturated participant rebuild promotes to its inferred pair
	// type inside a larger type expression.
	term_ref p = mk_lambda(
	    "y", mk_lambda("e",
	                   mk_applications(mk_const("agent"),
	                                   {mk_var("e"), mk_var("y")})));
	global_signature sig2 = sig;
	sig2.declare("u1", mk_sigma("e'", mk_const("event"),
	                            mk_applications(mk_const("agent"),
	                                            {mk_var("e'"),
	                                             mk_const("j")})));
	term_ref rebuilt = mk_applications(
	    mk_const(replace_agent_name),
	    {p, mk_const("j"), mk_const("m"), mk_const("u1")});
	CHECK(promotable_spine(sig2, rebuilt));
	CHECK(infer_sort(sig2, tel, rebuilt) == sort_kind::type);
	term_ref wrapped = mk_sigma("u", rebuilt, mk_unit_type());
	CHECK(infer_sort(sig2, tel, wrapped) == sort_kind::type);
}

TEST_CASE("checking records the widening it used") {
	global_signature sig = test_signature();
	telescope tel;
	term_ref wide = mk_sigma(
	    "e", mk_const("event"),
	    mk_sigma("_",
	             mk_application(mk_const("left"), mk_var("e")),
	             mk_applications(mk_const("agent"),
	                             {mk_var("e"), mk_const("j")})));
	term_ref narrow =
	    mk_sigma("e", mk_const("event"),
	             mk_applications(mk_const("agent"),
	                             {mk_var("e"), mk_const("j")}));
	global_signature sig2 = sig;
	sig2.declare("w0", wide);

	check_result r = check_type(sig2, tel, mk_const("w0"), narrow);
	CHECK(r.used.has_value());
	CHECK(r.elaborated->kind == term_kind::application);

	check_options strict = testgen::strict_options();
	CHECK_THROWS_AS(check_type(sig2, tel, mk_const("w0"), narrow,
	                           strict),
	                type_error);
}

TEST_CASE("well-typed substitution instances stay well typed") {
	testgen::substitution_stability_suite(99, 1000);
}

TEST_CASE("participant rebuilding preserves typing") {
	testgen::rebuild_subject_reduction_suite(4242, 1000);
}
