#include "dtse/signature.h"

namespace dtse {

telescope telescope::extended(std::string name, term_ref type) const {
	telescope out = *this;
	out.entries_.push_back({std::move(name), std::move(type)});
	return out;
}

std::optional<term_ref> telescope::lookup(const std::string& name) const {
	for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
		if (it->name == name) {
			return it->type;
		}
	}
	return std::nullopt;
}

void global_signature::declare(std::string name, term_ref type) {
	constants_[std::move(name)] = std::move(type);
}

void global_signature::declare_delta(std::string name, term_ref type,
                                     std::size_t arity, delta_rule rule) {
	constants_[name] = std::move(type);
	deltas_[std::move(name)] = delta_entry{arity, std::move(rule)};
}

std::optional<term_ref> global_signature::lookup(
    const std::string& name) const {
	auto it = constants_.find(name);
	if (it == constants_.end()) {
		return std::nullopt;
	}
	return it->second;
}

const global_signature::delta_entry* global_signature::delta_for(
    const std::string& name) const {
	auto it = deltas_.find(name);
	if (it == deltas_.end()) {
		return nullptr;
	}
	return &it->second;
}

bool global_signature::declared(const std::string& name) const {
	return constants_.count(name) != 0;
}

bool is_replace_constant(const std::string& name) {
	return name == replace_agent_name || name == replace_patient_name ||
	       name == replace_both_name;
}

namespace {

term_ref arrow(term_ref a, term_ref b) {
	return mk_pi("_", std::move(a), std::move(b));
}

// A saturated replace application rewrites to a symbolic pair: a fresh
// event constant together with an opaque proof constant standing for the
// reconstructed participant facts. The `!` in the minted names keeps them
// out of the user-writable namespace.
std::optional<term_ref> symbolic_event_pair(std::span<const term_ref>,
                                            delta_state& state) {
	const std::string suffix = std::to_string(++state.counter);
	return mk_pair(mk_const("e!" + suffix), mk_const("prf!" + suffix));
}

} // namespace

global_signature base_signature() {
	global_signature sig;

	const term_ref type_s = mk_sort(sort_kind::type);
	const term_ref entity = mk_const("entity");
	const term_ref event = mk_const("event");

	sig.declare("entity", type_s);
	sig.declare("event", type_s);
	sig.declare("agent", arrow(event, arrow(entity, type_s)));
	sig.declare("patient", arrow(event, arrow(entity, type_s)));
	sig.declare("unit", mk_unit_type());

	// One-participant property over events: entity -> event -> type.
	const term_ref unary_property =
	    arrow(entity, mk_pi("e", event, type_s));
	// Two-participant property: agent -> patient -> event -> type.
	const term_ref binary_property =
	    arrow(entity, arrow(entity, mk_pi("e", event, type_s)));

	auto event_of = [&](const term_ref& prop,
	                    const std::vector<term_ref>& participants,
	                    const std::string& binder) {
		std::vector<term_ref> args = participants;
		args.push_back(mk_var(binder));
		return mk_sigma(binder, event, mk_applications(prop, args));
	};

	// replaceA p original new u : picks the event out of u and rebuilds it
	// with `new` in the slot the property abstracts. replaceP is the same
	// shape used for the patient slot.
	{
		const term_ref p = mk_var("p");
		term_ref ty = mk_pi(
		    "p", unary_property,
		    mk_pi("original", entity,
		          mk_pi("new", entity,
		                mk_pi("u", event_of(p, {mk_var("original")}, "e'"),
		                      event_of(p, {mk_var("new")}, "e''")))));
		sig.declare_delta(replace_agent_name, ty, 4, symbolic_event_pair);
		sig.declare_delta(replace_patient_name, ty, 4, symbolic_event_pair);
	}

	// replaceAP p oagent nagent opatient npatient u : replaces both
	// participants at once.
	{
		const term_ref p = mk_var("p");
		term_ref ty = mk_pi(
		    "p", binary_property,
		    mk_pi(
		        "oagent", entity,
		        mk_pi(
		            "nagent", entity,
		            mk_pi(
		                "opatient", entity,
		                mk_pi("npatient", entity,
		                      mk_pi("u",
		                            event_of(p,
		                                     {mk_var("oagent"),
		                                      mk_var("opatient")},
		                                     "e'"),
		                            event_of(p,
		                                     {mk_var("nagent"),
		                                      mk_var("npatient")},
		                                     "e''")))))));
		sig.declare_delta(replace_both_name, ty, 6, symbolic_event_pair);
	}

	return sig;
}

} // namespace dtse
