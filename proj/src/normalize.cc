#include "dtse/normalize.h"

namespace dtse {

namespace {

struct reducer {
	const global_signature& sig;
	const normalize_options& opts;
	std::size_t steps = 0;
	delta_state deltas;

	void tick() {
		if (++steps > opts.max_steps) {
			throw depth_exceeded(opts.max_steps);
		}
	}

	// Applies one delta rule at the head of a saturated spine, keeping any
	// surplus arguments applied to the rewritten head.
	std::optional<term_ref> delta_step(const term_ref& t) {
		if (!opts.use_delta) {
			return std::nullopt;
		}
		spine_view view = spine(t);
		if (view.head->kind != term_kind::constant) {
			return std::nullopt;
		}
		const auto* entry = sig.delta_for(view.head->name);
		if (entry == nullptr || view.args.size() < entry->arity) {
			return std::nullopt;
		}
		std::span<const term_ref> exact(view.args.data(), entry->arity);
		auto replaced = entry->rule(exact, deltas);
		if (!replaced) {
			return std::nullopt;
		}
		std::vector<term_ref> rest(view.args.begin() + entry->arity,
		                           view.args.end());
		return mk_applications(*replaced, rest);
	}

	term_ref whnf(term_ref t) {
		for (;;) {
			switch (t->kind) {
			case term_kind::application: {
				term_ref fn = whnf(t->a);
				term_ref arg = t->b;
				if (fn->kind == term_kind::lambda) {
					tick();
					t = substitute(fn->b, fn->name, arg);
					continue;
				}
				if (fn.get() != t->a.get()) {
					t = mk_application(fn, arg);
				}
				if (auto stepped = delta_step(t)) {
					tick();
					t = *stepped;
					continue;
				}
				return t;
			}
			case term_kind::proj1:
			case term_kind::proj2: {
				term_ref subject = whnf(t->a);
				if (subject->kind == term_kind::pair) {
					tick();
					t = t->kind == term_kind::proj1 ? subject->a
					                                : subject->b;
					continue;
				}
				if (subject.get() != t->a.get()) {
					t = t->kind == term_kind::proj1 ? mk_proj1(subject)
					                                : mk_proj2(subject);
				}
				return t;
			}
			case term_kind::constant: {
				if (auto stepped = delta_step(t)) {
					tick();
					t = *stepped;
					continue;
				}
				return t;
			}
			default:
				return t;
			}
		}
	}

	term_ref nf(const term_ref& input) {
		term_ref t = whnf(input);
		switch (t->kind) {
		case term_kind::variable:
		case term_kind::constant:
		case term_kind::sort:
		case term_kind::unit_type:
			return t;
		case term_kind::lambda:
			return mk_lambda(t->name, nf(t->b));
		case term_kind::pi:
			return mk_pi(t->name, nf(t->a), nf(t->b));
		case term_kind::sigma:
			return mk_sigma(t->name, nf(t->a), nf(t->b));
		case term_kind::pair:
			return mk_pair(nf(t->a), nf(t->b));
		case term_kind::at_op:
			return mk_at_op(t->index, nf(t->a));
		case term_kind::application: {
			// Stuck spine: normalize the head's inert parts and each
			// argument. The head cannot become a redex again.
			spine_view view = spine(t);
			term_ref head = view.head;
			if (head->kind != term_kind::variable &&
			    head->kind != term_kind::constant &&
			    head->kind != term_kind::sort) {
				head = nf(head);
			}
			std::vector<term_ref> args;
			args.reserve(view.args.size());
			for (const auto& arg : view.args) {
				args.push_back(nf(arg));
			}
			return mk_applications(head, args);
		}
		case term_kind::proj1:
			return mk_proj1(nf(t->a));
		case term_kind::proj2:
			return mk_proj2(nf(t->a));
		}
		return t;
	}
};

} // namespace

term_ref normalize(const global_signature& sig, const term_ref& t,
                   const normalize_options& opts) {
	reducer r{sig, opts};
	return r.nf(t);
}

term_ref head_normalize(const global_signature& sig, const term_ref& t,
                        const normalize_options& opts) {
	reducer r{sig, opts};
	return r.whnf(t);
}

} // namespace dtse
