#include <doctest.h>

#include "dtse/normalize.h"
#include "dtse/signature.h"
#include "dtse/subtype.h"
#include "dtse/term.h"
#include "dtse/typecheck.h"

#include "generators.h"
#include "property_suites.h"

using namespace dtse;

namespace {

global_signature test_signature() {
	global_signature sig = fragment_signature();
	sig.declare("ev0", mk_const("event"));
	sig.declare("lft0", mk_application(mk_const("left"),
	                                   mk_const("ev0")));
	sig.declare("agj0", mk_applications(mk_const("agent"),
	                                    {mk_const("ev0"),
	                                     mk_const("j")}));
	sig.declare("ptm0", mk_applications(mk_const("patient"),
	                                    {mk_const("ev0"),
	                                     mk_const("m")}));
	return sig;
}

void recheck(const global_signature& sig, const coercion& co) {
	check_options strict = testgen::strict_options();
	std::set<std::string> avoid = free_vars(co.source);
	check_type(sig, telescope{}, co.witness,
	           mk_pi(fresh_name("w", avoid), co.source, co.target),
	           strict);
}

} // namespace

TEST_CASE("property chains read off event and entity pair types") {
	global_signature sig = test_signature();

	term_ref t = event_described_type(mk_const("left"), mk_const("j"));
	property_chain c = to_chain(sig, t);
	CHECK(c.head_type->name == "event");
	CHECK(c.propositions.size() == 2);

	// The rebuilt type is the normalized original.
	CHECK(alpha_eq(chain_type(c), normalize(sig, t)));

	// An embedded existential about the head counts as one
	// proposition, not a second head.
	term_ref nested = mk_sigma(
	    "e", mk_const("event"),
	    mk_sigma("x", mk_const("entity"),
	             mk_applications(mk_const("agent"),
	                             {mk_var("e"), mk_var("x")})));
	property_chain nc = to_chain(sig, nested);
	CHECK(nc.propositions.size() == 1);
	CHECK(nc.propositions[0]->kind == term_kind::sigma);

	// No chain without an atomic head.
	CHECK_THROWS_AS(to_chain(sig, mk_pi("x", mk_const("entity"),
	                                    mk_const("entity"))),
	                not_a_chain);
	CHECK_THROWS_AS(
	    to_chain(sig, mk_sigma("u", event_top_type(), mk_unit_type())),
	    not_a_chain);

	// A bare head with no properties is the empty chain.
	property_chain top = to_chain(sig, event_top_type());
	CHECK(top.propositions.empty());
}

TEST_CASE("chains widen by dropping properties, never by inventing them") {
	global_signature sig = test_signature();

	term_ref both = event_both_type(mk_const("j"), mk_const("m"));
	term_ref ag = event_agent_type(mk_const("j"));
	term_ref pt = event_patient_type(mk_const("m"));
	term_ref top = event_top_type();

	for (const auto& [sub, sup] : {std::pair{both, ag},
	                               std::pair{both, pt},
	                               std::pair{ag, top},
	                               std::pair{pt, top},
	                               std::pair{both, top}}) {
		auto co = is_subtype(sig, sub, sup);
		REQUIRE(co.has_value());
		recheck(sig, *co);
	}

	CHECK_FALSE(is_subtype(sig, ag, both).has_value());
	CHECK_FALSE(is_subtype(sig, pt, both).has_value());
	CHECK_FALSE(is_subtype(sig, top, ag).has_value());
	CHECK_FALSE(is_subtype(sig, ag, pt).has_value());

	// Entity chains against event chains never relate.
	term_ref hat_pack =
	    mk_sigma("x", mk_const("entity"),
	             mk_application(mk_const("hat"), mk_var("x")));
	CHECK_FALSE(is_subtype(sig, hat_pack, top).has_value());
	CHECK_FALSE(is_subtype(sig, both, hat_pack).has_value());
}

TEST_CASE("witnesses project the retained material") {
	global_signature sig = test_signature();
	term_ref both = event_both_type(mk_const("j"), mk_const("m"));
	term_ref ag = event_agent_type(mk_const("j"));

	auto co = is_subtype(sig, both, ag);
	REQUIRE(co.has_value());

	// Feed the coercion an actual inhabitant and watch it pick the
	// right proofs.
	term_ref inhabitant = mk_pair(
	    mk_const("ev0"), mk_pair(mk_const("agj0"), mk_const("ptm0")));
	term_ref out = apply_coercion(sig, *co, inhabitant);
	CHECK(alpha_eq(out, mk_pair(mk_const("ev0"), mk_const("agj0"))));

	auto co_p = is_subtype(sig, both,
	                       event_patient_type(mk_const("m")));
	REQUIRE(co_p.has_value());
	CHECK(alpha_eq(apply_coercion(sig, *co_p, inhabitant),
	               mk_pair(mk_const("ev0"), mk_const("ptm0"))));

	// Widening to the bare event type keeps only the head.
	auto co_top = is_subtype(sig, both, event_top_type());
	REQUIRE(co_top.has_value());
	term_ref topped = apply_coercion(sig, *co_top, inhabitant);
	REQUIRE(topped->kind == term_kind::pair);
	CHECK(alpha_eq(topped->a, mk_const("ev0")));
}

TEST_CASE("alpha-equal normal forms get the identity witness") {
	global_signature sig = test_signature();
	term_ref a = event_agent_type(mk_const("j"));
	term_ref b = mk_application(
	    mk_lambda("k", event_agent_type(mk_var("k"))), mk_const("j"));
	auto co = is_subtype(sig, a, b);
	REQUIRE(co.has_value());
	term_ref inhabitant = mk_pair(mk_const("ev0"), mk_const("agj0"));
	CHECK(alpha_eq(apply_coercion(sig, *co, inhabitant), inhabitant));
}

TEST_CASE("function types widen covariantly in their result") {
	global_signature sig = test_signature();
	term_ref dom = mk_const("entity");
	term_ref sub = mk_pi("x", dom,
	                     event_both_type(mk_var("x"), mk_const("m")));
	term_ref sup = mk_pi("x", dom, event_agent_type(mk_var("x")));

	auto co = is_subtype(sig, sub, sup);
	REQUIRE(co.has_value());
	recheck(sig, *co);

	CHECK_FALSE(is_subtype(sig, sup, sub).has_value());

	// Contravariant domains are not entertained.
	term_ref widened_dom = mk_pi(
	    "u",
	    mk_sigma("x", dom,
	             mk_application(mk_const("female"), mk_var("x"))),
	    event_top_type());
	CHECK_FALSE(
	    is_subtype(sig, mk_pi("u", dom, event_top_type()), widened_dom)
	        .has_value());
}

TEST_CASE("a leading component can be dropped on the way down") {
	global_signature sig = test_signature();
	term_ref payload = event_both_type(mk_const("j"), mk_const("m"));
	term_ref wrapped = mk_sigma("v", mk_unit_type(), payload);

	auto co = is_subtype(sig, wrapped,
	                     event_agent_type(mk_const("j")));
	REQUIRE(co.has_value());
	recheck(sig, *co);

	term_ref inhabitant = mk_pair(
	    mk_const("unit"),
	    mk_pair(mk_const("ev0"),
	            mk_pair(mk_const("agj0"), mk_const("ptm0"))));
	CHECK(alpha_eq(apply_coercion(sig, *co, inhabitant),
	               mk_pair(mk_const("ev0"), mk_const("agj0"))));
}

TEST_CASE("subtype witnesses satisfy the algebraic laws") {
	testgen::subtyping_laws_suite(777, 1000);
}
