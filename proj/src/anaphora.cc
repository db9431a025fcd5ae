#include "dtse/anaphora.h"

#include <algorithm>
#include <cassert>

#include "dtse/sexpr.h"

namespace dtse {

const char* to_string(reading_label label) {
	switch (label) {
	case reading_label::strict:
		return "strict";
	case reading_label::sloppy:
		return "sloppy";
	case reading_label::agent_replaced:
		return "agent-replaced";
	case reading_label::patient_replaced:
		return "patient-replaced";
	case reading_label::pronominal:
		return "pronominal";
	case reading_label::propositional:
		return "propositional";
	}
	return "unknown";
}

namespace {

const char* role_name(role_kind role) {
	return role == role_kind::agent ? "agent" : "patient";
}

check_options engine_options() {
	check_options opts;
	opts.use_subtyping = true;
	opts.allow_promotion = true;
	// Replace applications must stay stuck inside the engine so they can
	// be promoted to the event types they construct.
	opts.norm.use_delta = false;
	return opts;
}

term_ref norm_nd(const global_signature& sig, const term_ref& t) {
	normalize_options n;
	n.use_delta = false;
	return normalize(sig, t, n);
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

// Projection steps reaching each proposition's proof inside a value of
// the chain's type, in the order the chain lists the propositions: the
// body of the sigma is peeled one non-dependent component at a time, so
// proposition i sits under i + 1 second projections, with a first
// projection on top for all but the last.
void proposition_proof_paths(const term_ref& rest, std::vector<int>& prefix,
                             std::vector<std::vector<int>>& out) {
	if (rest->kind == term_kind::unit_type) {
		return;
	}
	if (rest->kind == term_kind::sigma &&
	    free_vars(rest->b).count(rest->name) == 0) {
		prefix.push_back(1);
		out.push_back(prefix);
		prefix.back() = 2;
		proposition_proof_paths(rest->b, prefix, out);
		prefix.pop_back();
		return;
	}
	out.push_back(prefix);
}

void extract_participants(const global_signature& sig, antecedent& a) {
	term_ref n = normalize(sig, a.type);
	std::vector<std::vector<int>> paths;
	if (n->kind == term_kind::sigma) {
		std::vector<int> prefix{2};
		proposition_proof_paths(n->b, prefix, paths);
	}
	for (std::size_t i = 0; i < a.chain.propositions.size(); ++i) {
		const auto& prop = a.chain.propositions[i];
		spine_view v = spine(prop);
		if (v.head->kind != term_kind::constant || v.args.size() != 2) {
			continue;
		}
		role_kind role;
		if (v.head->name == "agent") {
			role = role_kind::agent;
		} else if (v.head->name == "patient") {
			role = role_kind::patient;
		} else {
			continue;
		}
		if (v.args[0]->kind != term_kind::variable ||
		    v.args[0]->name != a.chain.head_binder) {
			continue;
		}
		participant p;
		p.entity = v.args[1];
		if (i < paths.size()) {
			p.proof_path = paths[i];
		}
		a.participants.emplace(role, std::move(p));
	}
}

struct harvester {
	const global_signature& sig;
	const harvest_options& opts;
	std::vector<antecedent> out;

	// Rightmost content first: the second component is more recent
	// discourse material than the node itself, which is more recent than
	// what the first component introduced.
	void visit(const term_ref& ty, const term_ref& value,
	           std::vector<int>& path, std::size_t depth) {
		if (depth > opts.max_depth || ty->kind != term_kind::sigma) {
			return;
		}
		term_ref second =
		    substitute(ty->b, ty->name, mk_proj1(value));
		path.push_back(2);
		visit(second, mk_proj2(value), path, depth + 1);
		path.pop_back();
		try {
			antecedent a;
			a.chain = to_chain(sig, ty);
			a.access_path = path;
			a.value = value;
			a.type = ty;
			extract_participants(sig, a);
			out.push_back(std::move(a));
		} catch (const not_a_chain&) {
			// Interior structure, not a referent on its own.
		}
		path.push_back(1);
		visit(ty->a, mk_proj1(value), path, depth + 1);
		path.pop_back();
	}
};

} // namespace

term_ref apply_path(const term_ref& base, const std::vector<int>& path) {
	term_ref t = base;
	for (int step : path) {
		t = step == 1 ? mk_proj1(t) : mk_proj2(t);
	}
	return t;
}

std::vector<antecedent> harvest_antecedents(const global_signature& sig,
                                            const term_ref& context_type,
                                            const std::string& context_var,
                                            const harvest_options& opts) {
	harvester h{sig, opts, {}};
	std::vector<int> path;
	h.visit(norm_nd(sig, context_type), mk_var(context_var), path, 0);
	return h.out;
}

term_ref abstract_property(
    const property_chain& chain,
    const std::vector<std::pair<role_kind, term_ref>>& designated) {
	std::set<std::string> avoid;
	avoid.insert(chain.head_binder);
	for (const auto& p : chain.propositions) {
		auto fv = free_vars(p);
		avoid.insert(fv.begin(), fv.end());
	}

	std::vector<term_ref> props = chain.propositions;
	std::vector<std::string> binders;
	for (const auto& [role, entity] : designated) {
		std::string binder =
		    fresh_name(binders.empty() ? "y" : "z", avoid);
		avoid.insert(binder);
		bool found = false;
		for (auto& prop : props) {
			spine_view v = spine(prop);
			if (v.head->kind != term_kind::constant ||
			    v.head->name != role_name(role) || v.args.size() != 2) {
				continue;
			}
			if (v.args[0]->kind != term_kind::variable ||
			    v.args[0]->name != chain.head_binder) {
				continue;
			}
			if (!alpha_eq(v.args[1], entity)) {
				continue;
			}
			prop = mk_applications(v.head, {v.args[0], mk_var(binder)});
			found = true;
			break;
		}
		if (!found) {
			throw occurrence_not_found(
			    std::string("no ") + role_name(role) +
			    " proposition over " + display_term(entity) +
			    " in the antecedent");
		}
		binders.push_back(binder);
	}

	term_ref out = mk_lambda(chain.head_binder, right_nested(props));
	for (auto it = binders.rbegin(); it != binders.rend(); ++it) {
		out = mk_lambda(*it, out);
	}
	return out;
}

namespace {

struct goal_shape {
	enum class form { predicate, referent } kind;
	// predicate form: the role the new participant fills.
	role_kind role = role_kind::agent;
	// referent form: the ascribed chain target.
	term_ref target;
};

goal_shape classify_goal(const global_signature& sig, const term_ref& asc) {
	term_ref a = norm_nd(sig, asc);
	if (a->kind == term_kind::pi) {
		if (!(a->a->kind == term_kind::constant &&
		      a->a->name == "entity")) {
			throw no_resolution(0, "unsupported goal ascription: " +
			                           display_term(asc));
		}
		property_chain chain;
		try {
			chain = to_chain(sig, a->b);
		} catch (const not_a_chain&) {
			throw no_resolution(0, "goal ascription result is not an "
			                       "event chain: " +
			                           display_term(asc));
		}
		for (const auto& prop : chain.propositions) {
			spine_view v = spine(prop);
			if (v.head->kind == term_kind::constant &&
			    v.args.size() == 2 &&
			    v.args[0]->kind == term_kind::variable &&
			    v.args[0]->name == chain.head_binder &&
			    v.args[1]->kind == term_kind::variable &&
			    v.args[1]->name == a->name) {
				if (v.head->name == "agent") {
					return {goal_shape::form::predicate, role_kind::agent,
					        nullptr};
				}
				if (v.head->name == "patient") {
					return {goal_shape::form::predicate,
					        role_kind::patient, nullptr};
				}
			}
		}
		throw no_resolution(0,
		                    "goal ascription fixes no thematic role: " +
		                        display_term(asc));
	}
	return {goal_shape::form::referent, role_kind::agent, a};
}

// Predicate-anaphora candidates from one event antecedent: the reading
// that keeps every undesignated occurrence, and, when the patient was
// drawn from an accessible referent owned by the replaced participant,
// the reading that re-creates that referent for the new one.
void predicate_candidates(const std::vector<antecedent>& ants,
                          const antecedent& a, role_kind role,
                          const std::string& cv,
                          std::vector<goal_candidate>& out) {
	auto old_it = a.participants.find(role);
	if (old_it == a.participants.end()) {
		return;
	}
	const term_ref old = old_it->second.entity;

	std::set<std::string> avoid = free_vars(a.value);
	for (const auto& p : a.chain.propositions) {
		auto fv = free_vars(p);
		avoid.insert(fv.begin(), fv.end());
	}
	avoid.insert(cv);
	const std::string xv = fresh_name("x", avoid);
	avoid.insert(xv);

	term_ref basic;
	try {
		term_ref p = abstract_property(a.chain, {{role, old}});
		const char* combinator = role == role_kind::agent
		                             ? replace_agent_name
		                             : replace_patient_name;
		basic = mk_lambda(
		    cv, mk_lambda(xv, mk_applications(mk_const(combinator),
		                                      {p, old, mk_var(xv),
		                                       a.value})));
	} catch (const occurrence_not_found&) {
		return;
	}

	std::optional<term_ref> sloppy;
	if (role == role_kind::agent) {
		auto pt_it = a.participants.find(role_kind::patient);
		if (pt_it != a.participants.end() &&
		    pt_it->second.entity->kind == term_kind::proj1) {
			const term_ref patient = pt_it->second.entity;
			const term_ref source = patient->a;
			for (const auto& b : ants) {
				if (!alpha_eq(b.value, source)) {
					continue;
				}
				if (!(b.chain.head_type->kind == term_kind::constant &&
				      b.chain.head_type->name == "entity")) {
					continue;
				}
				bool owned = false;
				for (const auto& prop : b.chain.propositions) {
					if (contains_subterm(prop, old)) {
						owned = true;
					}
				}
				if (!owned) {
					continue;
				}
				try {
					term_ref pq = abstract_property(
					    a.chain,
					    {{role_kind::agent, old},
					     {role_kind::patient, patient}});
					const std::string uv = fresh_name("u", avoid);
					// Rebuild the referent's description around the
					// replacement entity; rename its head binder first
					// so the inserted variable is not captured.
					std::string hb = b.chain.head_binder;
					std::vector<term_ref> props = b.chain.propositions;
					if (hb == xv) {
						std::set<std::string> taken = avoid;
						for (const auto& prop : props) {
							auto fv = free_vars(prop);
							taken.insert(fv.begin(), fv.end());
						}
						const std::string renamed =
						    fresh_name(hb, taken);
						for (auto& prop : props) {
							prop = substitute(prop, hb,
							                  mk_var(renamed));
						}
						hb = renamed;
					}
					std::vector<term_ref> transferred;
					for (const auto& prop : props) {
						transferred.push_back(
						    replace_subterm(prop, old, mk_var(xv)));
					}
					term_ref own_type =
					    mk_sigma(hb, b.chain.head_type,
					             right_nested(transferred));
					term_ref body = mk_sigma(
					    uv, own_type,
					    mk_applications(mk_const(replace_both_name),
					                    {pq, old, mk_var(xv), patient,
					                     mk_proj1(mk_var(uv)), a.value}));
					sloppy = mk_lambda(cv, mk_lambda(xv, body));
				} catch (const occurrence_not_found&) {
					// Patient occurrence not literal in the chain; no
					// re-created reading from this referent.
				}
				break;
			}
		}
	}

	reading_label basic_label =
	    sloppy ? reading_label::strict
	           : (role == role_kind::agent ? reading_label::agent_replaced
	                                       : reading_label::patient_replaced);
	out.push_back({basic, basic_label});
	if (sloppy) {
		out.push_back({*sloppy, reading_label::sloppy});
	}
}

void referent_candidates(const global_signature& sig,
                         const std::vector<antecedent>& ants,
                         const term_ref& target, const std::string& cv,
                         std::vector<goal_candidate>& out) {
	// Bare entity target: project the head out of any entity chain.
	if (target->kind == term_kind::constant && target->name == "entity") {
		for (const auto& a : ants) {
			if (a.chain.head_type->kind == term_kind::constant &&
			    a.chain.head_type->name == "entity") {
				out.push_back({mk_lambda(cv, mk_proj1(a.value)),
				               reading_label::pronominal});
			}
		}
		return;
	}

	property_chain target_chain;
	try {
		target_chain = to_chain(sig, target);
	} catch (const not_a_chain&) {
		return;
	}
	const bool entity_target =
	    target_chain.head_type->kind == term_kind::constant &&
	    target_chain.head_type->name == "entity";

	for (const auto& a : ants) {
		if (!alpha_eq(a.chain.head_type, target_chain.head_type)) {
			continue;
		}
		auto co = is_subtype(sig, a.type, target);
		if (!co) {
			continue;
		}
		term_ref projected =
		    norm_nd(sig, mk_application(co->witness, a.value));
		out.push_back({mk_lambda(cv, projected),
		               entity_target ? reading_label::pronominal
		                             : reading_label::propositional});
	}
}

// Entity constants the context type mentions, most recent first: the
// second component of a context pair type is newer discourse material
// than the first, so the walk takes second components before first ones.
void mentioned_entities(const global_signature& sig, const term_ref& t,
                        std::vector<term_ref>& out,
                        std::set<std::string>& seen) {
	if (t->kind == term_kind::constant) {
		auto ty = sig.lookup(t->name);
		if (ty && (*ty)->kind == term_kind::constant &&
		    (*ty)->name == "entity" && seen.insert(t->name).second) {
			out.push_back(t);
		}
		return;
	}
	if (t->b) {
		mentioned_entities(sig, t->b, out, seen);
	}
	if (t->a) {
		mentioned_entities(sig, t->a, out, seen);
	}
}

// Last-resort pronominal candidates when no context component carries a
// matching referent: an entity constant mentioned by the context counts
// when the signature declares a proof of each required property at that
// constant, as it does for the gender of a proper name.
void mined_referent_candidates(const global_signature& sig,
                               const term_ref& context,
                               const term_ref& target, const std::string& cv,
                               std::vector<goal_candidate>& out) {
	property_chain chain;
	try {
		chain = to_chain(sig, target);
	} catch (const not_a_chain&) {
		return;
	}
	if (!(chain.head_type->kind == term_kind::constant &&
	      chain.head_type->name == "entity") ||
	    chain.propositions.empty()) {
		return;
	}
	std::vector<term_ref> ks;
	std::set<std::string> seen;
	mentioned_entities(sig, norm_nd(sig, context), ks, seen);
	for (const auto& k : ks) {
		std::vector<term_ref> proofs;
		bool complete = true;
		for (const auto& prop : chain.propositions) {
			term_ref want = norm_nd(
			    sig, substitute(prop, chain.head_binder, k));
			term_ref found;
			for (const auto& [name, ty] : sig.constants()) {
				if (alpha_eq(norm_nd(sig, ty), want)) {
					found = mk_const(name);
					break;
				}
			}
			if (!found) {
				complete = false;
				break;
			}
			proofs.push_back(found);
		}
		if (!complete) {
			continue;
		}
		term_ref proof = proofs.back();
		for (std::size_t i = proofs.size() - 1; i-- > 0;) {
			proof = mk_pair(proofs[i], proof);
		}
		out.push_back({mk_lambda(cv, mk_pair(k, proof)),
		               reading_label::pronominal});
	}
}

} // namespace

std::vector<goal_candidate> resolve_goal(const global_signature& sig,
                                         const felicity_goal& goal,
                                         const resolution_hints& hints) {
	const check_options copts = engine_options();
	term_ref goal_n = norm_nd(sig, goal.goal_type);
	if (goal_n->kind != term_kind::pi) {
		throw no_resolution(goal.index,
		                    "goal type is not a function out of the "
		                    "context: " +
		                        display_term(goal.goal_type));
	}
	term_ref context = goal_n->a;
	term_ref asc = goal_n->b;

	std::set<std::string> cv_avoid = free_vars(asc);
	{
		auto fv = free_vars(context);
		cv_avoid.insert(fv.begin(), fv.end());
	}
	const std::string cv = fresh_name(
	    goal_n->name == "_" ? "c" : goal_n->name, cv_avoid);

	harvest_options hopts;
	hopts.max_depth = hints.max_depth;
	auto ants = harvest_antecedents(sig, context, cv, hopts);

	goal_shape shape;
	try {
		shape = classify_goal(sig, asc);
	} catch (no_resolution& e) {
		throw no_resolution(goal.index, e.what());
	}

	std::vector<goal_candidate> raw;
	if (shape.kind == goal_shape::form::predicate) {
		for (const auto& a : ants) {
			if (raw.size() >= hints.max_candidates) {
				break;
			}
			predicate_candidates(ants, a, shape.role, cv, raw);
		}
	} else {
		referent_candidates(sig, ants, shape.target, cv, raw);
		if (raw.empty()) {
			mined_referent_candidates(sig, context, shape.target, cv,
			                          raw);
		}
	}
	if (raw.size() > hints.max_candidates) {
		raw.resize(hints.max_candidates);
	}

	// Felicity: a candidate survives only if its witness checks against
	// the goal.
	std::vector<goal_candidate> out;
	for (auto& cand : raw) {
		try {
			check_type(sig, telescope{}, cand.witness, goal_n, copts);
			out.push_back(std::move(cand));
		} catch (const type_error&) {
			// Shape matched but the proof obligation failed; drop it.
		}
	}
	return out;
}

namespace {

bool contains_at(const term_ref& t) {
	if (t->kind == term_kind::at_op) {
		return true;
	}
	if (t->a && contains_at(t->a)) {
		return true;
	}
	return t->b && contains_at(t->b);
}

class context_closure_error : public std::logic_error {
public:
	using std::logic_error::logic_error;
};

term_ref bind_components(const term_ref& type, const term_ref& pattern,
                         const term_ref& replacement) {
	if (pattern->kind == term_kind::pair) {
		term_ref step =
		    bind_components(type, pattern->a, mk_proj1(replacement));
		return bind_components(step, pattern->b, mk_proj2(replacement));
	}
	return replace_subterm(type, pattern, replacement);
}

// Closed type of a context tuple: pairs become dependent pair types, with
// every reference to an earlier component abstracted into a projection
// of the new binder.
term_ref context_closure(const global_signature& sig, const telescope& tel,
                         const term_ref& t) {
	if (t->kind == term_kind::pair) {
		term_ref first_ty = context_closure(sig, tel, t->a);
		term_ref second_ty = context_closure(sig, tel, t->b);
		std::set<std::string> avoid = free_vars(first_ty);
		auto fv2 = free_vars(second_ty);
		avoid.insert(fv2.begin(), fv2.end());
		auto fvt = free_vars(t);
		avoid.insert(fvt.begin(), fvt.end());
		const std::string v = fresh_name("v", avoid);
		second_ty = bind_components(second_ty, t->a, mk_var(v));
		return mk_sigma(v, first_ty, second_ty);
	}
	return infer_type(sig, tel, t, engine_options());
}

struct walker {
	const global_signature& sig;
	const resolve_options& opts;
	check_options copts = engine_options();

	struct branch {
		term_ref t;
		std::map<std::size_t, term_ref> assignments;
		std::map<std::size_t, reading_label> labels;
		std::map<std::size_t, term_ref> replacements;
	};

	resolution_hints hints_for(std::size_t index) const {
		auto it = opts.hints.find(index);
		return it == opts.hints.end() ? resolution_hints{} : it->second;
	}

	void trace(const std::string& line) const {
		if (opts.trace) {
			opts.trace->push_back(line);
		}
	}

	static branch merge(const branch& a, const branch& b, term_ref t) {
		branch out;
		out.t = std::move(t);
		out.assignments = a.assignments;
		out.assignments.insert(b.assignments.begin(), b.assignments.end());
		out.labels = a.labels;
		out.labels.insert(b.labels.begin(), b.labels.end());
		out.replacements = a.replacements;
		out.replacements.insert(b.replacements.begin(),
		                        b.replacements.end());
		return out;
	}

	std::vector<branch> process(const telescope& tel, const term_ref& t) {
		if (!contains_at(t)) {
			return {branch{t, {}, {}, {}}};
		}
		spine_view view = spine(t);
		if (view.head->kind == term_kind::at_op && !view.args.empty()) {
			return process_site(tel, view);
		}
		switch (t->kind) {
		case term_kind::pi:
		case term_kind::sigma: {
			std::vector<branch> out;
			for (const auto& first : process(tel, t->a)) {
				telescope inner = tel.extended(
				    t->name, deep_promote(sig, tel, first.t, copts));
				for (const auto& second : process(inner, t->b)) {
					term_ref rebuilt =
					    t->kind == term_kind::pi
					        ? mk_pi(t->name, first.t, second.t)
					        : mk_sigma(t->name, first.t, second.t);
					out.push_back(merge(first, second, rebuilt));
				}
			}
			return out;
		}
		case term_kind::lambda: {
			std::vector<branch> out;
			for (const auto& body : process(tel, t->b)) {
				branch b = body;
				b.t = mk_lambda(t->name, body.t);
				out.push_back(std::move(b));
			}
			return out;
		}
		case term_kind::application:
		case term_kind::pair: {
			std::vector<branch> out;
			for (const auto& left : process(tel, t->a)) {
				for (const auto& right : process(tel, t->b)) {
					term_ref rebuilt =
					    t->kind == term_kind::application
					        ? mk_application(left.t, right.t)
					        : mk_pair(left.t, right.t);
					out.push_back(merge(left, right, rebuilt));
				}
			}
			return out;
		}
		case term_kind::proj1:
		case term_kind::proj2: {
			std::vector<branch> out;
			for (const auto& inner : process(tel, t->a)) {
				branch b = inner;
				b.t = t->kind == term_kind::proj1 ? mk_proj1(inner.t)
				                                  : mk_proj2(inner.t);
				out.push_back(std::move(b));
			}
			return out;
		}
		default:
			// A bare anaphora site with no context cannot be resolved.
			throw no_resolution(t->kind == term_kind::at_op ? t->index : 0,
			                    "anaphora site not applied to a context: " +
			                        display_term(t));
		}
	}

	std::vector<branch> process_site(const telescope& tel,
	                                 const spine_view& view) {
		const std::size_t index = view.head->index;
		// Resolve nested sites in the arguments first.
		std::vector<branch> arg_sets{branch{nullptr, {}, {}, {}}};
		std::vector<std::vector<term_ref>> arg_lists{{}};
		for (const auto& arg : view.args) {
			std::vector<branch> next_sets;
			std::vector<std::vector<term_ref>> next_lists;
			auto resolved = process(tel, arg);
			for (std::size_t i = 0; i < arg_sets.size(); ++i) {
				for (const auto& r : resolved) {
					next_sets.push_back(
					    merge(arg_sets[i], r, nullptr));
					auto list = arg_lists[i];
					list.push_back(r.t);
					next_lists.push_back(std::move(list));
				}
			}
			arg_sets = std::move(next_sets);
			arg_lists = std::move(next_lists);
		}

		std::vector<branch> out;
		for (std::size_t i = 0; i < arg_sets.size(); ++i) {
			const auto& args = arg_lists[i];
			term_ref gamma = norm_nd(
			    sig, context_closure(sig, tel, args.front()));
			if (!free_vars(gamma).empty()) {
				throw context_closure_error(
				    "context type of site " + std::to_string(index) +
				    " is not closed: " + display_term(gamma));
			}
			felicity_goal goal{index, gamma,
			                   mk_pi("c", gamma, view.head->a)};
			if (opts.goals != nullptr) {
				opts.goals->emplace(index, goal);
			}
			trace("site @" + std::to_string(index) +
			      "  context: " + display_term(gamma));
			trace("site @" + std::to_string(index) +
			      "  goal:    " + display_term(goal.goal_type));
			auto cands = resolve_goal(sig, goal, hints_for(index));
			trace("site @" + std::to_string(index) + "  candidates: " +
			      std::to_string(cands.size()));
			if (cands.empty()) {
				throw no_resolution(
				    index, "no witness for anaphora site " +
				               std::to_string(index) + " against " +
				               display_term(goal.goal_type));
			}
			for (const auto& cand : cands) {
				trace("site @" + std::to_string(index) + "  witness [" +
				      to_string(cand.label) +
				      "]: " + display_term(cand.witness));
				term_ref applied = norm_nd(
				    sig, mk_applications(cand.witness, args));
				branch b = arg_sets[i];
				b.t = applied;
				b.assignments[index] = cand.witness;
				b.labels[index] = cand.label;
				b.replacements[index] = norm_nd(
				    sig, deep_promote(sig, tel, applied, copts));
				out.push_back(std::move(b));
			}
		}
		return out;
	}
};

std::optional<reading_label> overall_label(
    const std::map<std::size_t, reading_label>& labels) {
	if (labels.empty()) {
		return std::nullopt;
	}
	for (const auto& [index, label] : labels) {
		if (label == reading_label::strict ||
		    label == reading_label::sloppy) {
			return label;
		}
	}
	return labels.rbegin()->second;
}

} // namespace

std::vector<resolution> resolve_discourse(const global_signature& sig,
                                          const term_ref& discourse,
                                          const term_ref& initial_context,
                                          const resolve_options& opts) {
	const check_options copts = engine_options();
	if (discourse->kind != term_kind::lambda) {
		throw type_error(type_error_kind::mismatch, "", discourse, nullptr,
		                 nullptr,
		                 "a discourse is a function out of its initial "
		                 "context");
	}
	const std::string cvar = discourse->name;
	term_ref gamma0 = norm_nd(sig, initial_context);
	telescope tel = telescope{}.extended(cvar, gamma0);

	// Felicity of the discourse itself, with unresolved sites standing
	// for their ascriptions.
	if (infer_sort(sig, tel, discourse->b, copts) != sort_kind::type) {
		throw type_error(type_error_kind::sort_mismatch, "", discourse->b,
		                 nullptr, nullptr,
		                 "discourse body is not a proposition");
	}

	walker w{sig, opts};
	auto branches = w.process(tel, discourse->b);

	const bool closable = gamma0->kind == term_kind::unit_type;
	std::vector<resolution> out;
	for (const auto& b : branches) {
		term_ref interp = norm_nd(sig, b.t);
		interp = deep_promote(sig, tel, interp, copts);
		interp = norm_nd(sig, interp);
		if (closable) {
			interp = norm_nd(
			    sig, substitute(interp, cvar, mk_const("unit")));
		}
		bool duplicate = false;
		for (const auto& prior : out) {
			if (alpha_eq(prior.interpretation, interp)) {
				duplicate = true;
				break;
			}
		}
		if (duplicate) {
			continue;
		}
		resolution r;
		r.assignments = b.assignments;
		r.labels = b.labels;
		r.replacements = b.replacements;
		r.interpretation = interp;
		r.label = overall_label(b.labels);
		out.push_back(std::move(r));
	}
	if (opts.max_readings != 0 && out.size() > opts.max_readings) {
		out.resize(opts.max_readings);
	}
	return out;
}

term_ref delta_replace(const global_signature& sig,
                       const term_ref& application) {
	spine_view view = spine(application);
	if (view.head->kind != term_kind::constant ||
	    !is_replace_constant(view.head->name)) {
		throw ill_typed_application(
		    "not an application of a replace combinator: " +
		    display_term(application));
	}
	const auto* entry = sig.delta_for(view.head->name);
	if (entry == nullptr || view.args.size() != entry->arity) {
		throw ill_typed_application(
		    "replace combinator expects exactly " +
		    std::to_string(entry == nullptr ? 0 : entry->arity) +
		    " arguments");
	}
	try {
		check_options copts = engine_options();
		infer_type(sig, telescope{}, application, copts);
	} catch (const type_error& e) {
		throw ill_typed_application(e.what());
	}
	delta_state state;
	std::span<const term_ref> args(view.args.data(), view.args.size());
	auto rewritten = entry->rule(args, state);
	assert(rewritten);
	return *rewritten;
}

} // namespace dtse
