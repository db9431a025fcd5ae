#include "dtse/subtype.h"

#include <algorithm>

namespace dtse {

namespace {

bool atomic_head_type(const term_ref& t) {
	return t->kind == term_kind::constant &&
	       (t->name == "entity" || t->name == "event");
}

// Splits the part of a chain after the head into propositions. A
// non-dependent sigma separates; anything else (including a dependent
// sigma, an embedded existential) is one proposition.
void collect_propositions(const term_ref& rest, std::vector<term_ref>& out) {
	if (rest->kind == term_kind::unit_type) {
		return;
	}
	if (rest->kind == term_kind::sigma &&
	    free_vars(rest->b).count(rest->name) == 0) {
		out.push_back(rest->a);
		collect_propositions(rest->b, out);
		return;
	}
	out.push_back(rest);
}

} // namespace

property_chain to_chain(const global_signature& sig, const term_ref& type) {
	term_ref n = normalize(sig, type);
	if (n->kind != term_kind::sigma) {
		throw not_a_chain("type does not start with a pair of head and "
		                  "propositions",
		                  n);
	}
	if (!atomic_head_type(normalize(sig, n->a))) {
		throw not_a_chain("head binder type is not entity or event", n);
	}
	property_chain chain;
	chain.head_binder = n->name;
	chain.head_type = normalize(sig, n->a);
	collect_propositions(n->b, chain.propositions);
	return chain;
}

term_ref chain_type(const property_chain& chain) {
	term_ref rest = mk_unit_type();
	if (!chain.propositions.empty()) {
		rest = chain.propositions.back();
		for (std::size_t i = chain.propositions.size() - 1; i-- > 0;) {
			rest = mk_sigma("_", chain.propositions[i], rest);
		}
	}
	return mk_sigma(chain.head_binder, chain.head_type, rest);
}

namespace {

// Renames a chain proposition's head references to a shared name so
// propositions of different chains compare by alpha-equivalence.
term_ref reheaded(const term_ref& prop, const std::string& binder,
                  const std::string& shared) {
	return substitute(prop, binder, mk_var(shared));
}

std::string shared_head_name(const property_chain& a,
                             const property_chain& b) {
	std::set<std::string> avoid;
	for (const auto& p : a.propositions) {
		auto fv = free_vars(p);
		avoid.insert(fv.begin(), fv.end());
	}
	for (const auto& p : b.propositions) {
		auto fv = free_vars(p);
		avoid.insert(fv.begin(), fv.end());
	}
	return fresh_name("h!", avoid);
}

// Proof terms of each source proposition, as projections of the proof
// tree after the head. Mirrors collect_propositions.
void collect_proofs(const term_ref& rest, const term_ref& base,
                    std::vector<term_ref>& out) {
	if (rest->kind == term_kind::unit_type) {
		return;
	}
	if (rest->kind == term_kind::sigma &&
	    free_vars(rest->b).count(rest->name) == 0) {
		out.push_back(mk_proj1(base));
		collect_proofs(rest->b, mk_proj2(base), out);
		return;
	}
	out.push_back(base);
}

std::optional<coercion> chain_subtype(const global_signature& sig,
                                      const term_ref& sub_n,
                                      const term_ref& sup_n) {
	property_chain sub_chain;
	property_chain sup_chain;
	try {
		sub_chain = to_chain(sig, sub_n);
		sup_chain = to_chain(sig, sup_n);
	} catch (const not_a_chain&) {
		return std::nullopt;
	}
	if (!alpha_eq(sub_chain.head_type, sup_chain.head_type)) {
		return std::nullopt;
	}

	const std::string shared = shared_head_name(sub_chain, sup_chain);
	std::vector<term_ref> sub_props;
	for (const auto& p : sub_chain.propositions) {
		sub_props.push_back(reheaded(p, sub_chain.head_binder, shared));
	}

	const std::set<std::string> wit_avoid = free_vars(sub_n);
	const std::string w = fresh_name("w", wit_avoid);
	std::vector<term_ref> proofs;
	collect_proofs(normalize(sig, sub_n)->b, mk_proj2(mk_var(w)), proofs);

	// Each target proposition must match a distinct source proposition;
	// the witness forwards the matched proofs in target order.
	std::vector<bool> used(sub_props.size(), false);
	std::vector<term_ref> picked;
	for (const auto& p : sup_chain.propositions) {
		term_ref want = reheaded(p, sup_chain.head_binder, shared);
		bool found = false;
		for (std::size_t i = 0; i < sub_props.size(); ++i) {
			if (!used[i] && alpha_eq(sub_props[i], want)) {
				used[i] = true;
				picked.push_back(proofs[i]);
				found = true;
				break;
			}
		}
		if (!found) {
			return std::nullopt;
		}
	}

	term_ref rest_proof = mk_const("unit");
	if (!picked.empty()) {
		rest_proof = picked.back();
		for (std::size_t i = picked.size() - 1; i-- > 0;) {
			rest_proof = mk_pair(picked[i], rest_proof);
		}
	}
	term_ref witness =
	    mk_lambda(w, mk_pair(mk_proj1(mk_var(w)), rest_proof));
	return coercion{normalize(sig, witness), sub_n, sup_n};
}

} // namespace

std::optional<coercion> is_subtype(const global_signature& sig,
                                   const term_ref& sub,
                                   const term_ref& sup) {
	term_ref sub_n = normalize(sig, sub);
	term_ref sup_n = normalize(sig, sup);

	if (alpha_eq(sub_n, sup_n)) {
		const std::string w = fresh_name("w", {});
		return coercion{mk_lambda(w, mk_var(w)), sub_n, sup_n};
	}

	// Covariant result rule: (x : A) -> B <= (x : A) -> B' when B <= B'.
	if (sub_n->kind == term_kind::pi && sup_n->kind == term_kind::pi) {
		if (!alpha_eq(sub_n->a, sup_n->a)) {
			return std::nullopt;
		}
		std::set<std::string> avoid = free_vars(sub_n);
		auto fv_sup = free_vars(sup_n);
		avoid.insert(fv_sup.begin(), fv_sup.end());
		const std::string x = fresh_name(sub_n->name, avoid);
		term_ref body_sub = substitute(sub_n->b, sub_n->name, mk_var(x));
		term_ref body_sup = substitute(sup_n->b, sup_n->name, mk_var(x));
		auto inner = is_subtype(sig, body_sub, body_sup);
		if (!inner) {
			return std::nullopt;
		}
		avoid.insert(x);
		const std::string f = fresh_name("f", avoid);
		term_ref witness = mk_lambda(
		    f, mk_lambda(x, mk_application(inner->witness,
		                                   mk_application(mk_var(f),
		                                                  mk_var(x)))));
		return coercion{normalize(sig, witness), sub_n, sup_n};
	}

	if (auto direct = chain_subtype(sig, sub_n, sup_n)) {
		return direct;
	}

	// Left drop: a pair type coerces to whatever its second component
	// coerces to, by projecting the leading component away. Witnesses
	// into the retained part are pure projections, so the dropped
	// binder never leaks into the coercion.
	if (sub_n->kind == term_kind::sigma) {
		auto inner = is_subtype(sig, sub_n->b, sup_n);
		if (inner) {
			const std::string w = fresh_name("w", free_vars(sub_n));
			term_ref witness = mk_lambda(
			    w, mk_application(inner->witness, mk_proj2(mk_var(w))));
			return coercion{normalize(sig, witness), sub_n, sup_n};
		}
	}

	return std::nullopt;
}

term_ref apply_coercion(const global_signature& sig, const coercion& co,
                        const term_ref& t) {
	return normalize(sig, mk_application(co.witness, t));
}

namespace {

term_ref role_prop(const char* role, const std::string& binder,
                   const term_ref& participant) {
	return mk_applications(mk_const(role), {mk_var(binder), participant});
}

} // namespace

term_ref event_top_type() {
	return mk_sigma("e", mk_const("event"), mk_unit_type());
}

term_ref event_agent_type(term_ref agent) {
	return mk_sigma("e", mk_const("event"),
	                role_prop("agent", "e", std::move(agent)));
}

term_ref event_patient_type(term_ref patient) {
	return mk_sigma("e", mk_const("event"),
	                role_prop("patient", "e", std::move(patient)));
}

term_ref event_both_type(term_ref agent, term_ref patient) {
	return mk_sigma("e", mk_const("event"),
	                mk_sigma("_", role_prop("agent", "e", std::move(agent)),
	                         role_prop("patient", "e", std::move(patient))));
}

term_ref event_described_type(term_ref nature, term_ref agent) {
	return mk_sigma("e", mk_const("event"),
	                mk_sigma("_", mk_application(std::move(nature), mk_var("e")),
	                         role_prop("agent", "e", std::move(agent))));
}

} // namespace dtse
