// Command-line front end: type checking, subtyping queries, discourse
// resolution, and first-order export over the controlled fragment.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dtse/anaphora.h"
#include "dtse/fol.h"
#include "dtse/fragment.h"
#include "dtse/report.h"
#include "dtse/sexpr.h"
#include "dtse/typecheck.h"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_error = 1;
constexpr int exit_no_resolution = 2;

std::string read_file(const std::string& path) {
	std::ifstream in(path, std::ios::binary);
	if (!in) {
		throw std::runtime_error("cannot open " + path);
	}
	std::ostringstream buffer;
	buffer << in.rdbuf();
	return buffer.str();
}

// A term argument names either a file holding the term or the term
// itself.
std::string read_term_argument(const std::string& arg) {
	std::error_code ec;
	if (std::filesystem::is_regular_file(arg, ec)) {
		return read_file(arg);
	}
	return arg;
}

struct loaded_language {
	dtse::lexicon lex;
	dtse::global_signature sig;
};

loaded_language load_language(const std::string& lexicon_path) {
	loaded_language out;
	out.lex = lexicon_path.empty()
	              ? dtse::builtin_lexicon()
	              : dtse::parse_lexicon(read_file(lexicon_path));
	out.sig = dtse::fragment_signature();
	dtse::extend_signature(out.sig, out.lex);
	return out;
}

struct resolve_run {
	dtse::run_report report;
	std::vector<std::string> trace;
};

resolve_run run_discourse(const loaded_language& lang,
                          const std::string& path, std::size_t max_readings,
                          bool want_trace) {
	const std::string text = read_file(path);
	dtse::discourse d = dtse::build_discourse(lang.lex, text);

	resolve_run run;
	std::map<std::size_t, dtse::felicity_goal> goals;
	dtse::resolve_options ropts;
	ropts.hints = d.hints;
	ropts.max_readings = max_readings;
	ropts.goals = &goals;
	if (want_trace) {
		ropts.trace = &run.trace;
	}
	auto resolutions = dtse::resolve_discourse(
	    lang.sig, d.prop.term, dtse::mk_unit_type(), ropts);

	run.report.source = text;
	for (const auto& [index, goal] : goals) {
		run.report.goals.push_back(
		    {index, goal.context_type, goal.goal_type});
	}
	for (const auto& r : resolutions) {
		dtse::reading_entry entry;
		entry.label = r.label ? dtse::to_string(*r.label) : "";
		entry.formula = dtse::to_fol(lang.sig, r.interpretation);
		entry.interpretation = r.interpretation;
		run.report.readings.push_back(std::move(entry));
	}
	return run;
}

void print_trace(const std::vector<std::string>& trace) {
	for (const auto& line : trace) {
		std::cerr << line << "\n";
	}
}

int cmd_check(const std::string& term_arg,
              const std::string& lexicon_path) {
	loaded_language lang = load_language(lexicon_path);
	dtse::term_ref term = dtse::parse_term(read_term_argument(term_arg));
	dtse::term_ref type =
	    dtse::infer_type(lang.sig, dtse::telescope{}, term);
	std::cout << dtse::display_term(type) << "\n";
	return exit_ok;
}

int cmd_subtype(const std::string& sub_arg, const std::string& sup_arg,
                const std::string& lexicon_path) {
	loaded_language lang = load_language(lexicon_path);
	dtse::term_ref sub = dtse::parse_term(read_term_argument(sub_arg));
	dtse::term_ref sup = dtse::parse_term(read_term_argument(sup_arg));
	dtse::infer_sort(lang.sig, dtse::telescope{}, sub);
	dtse::infer_sort(lang.sig, dtse::telescope{}, sup);
	auto co = dtse::is_subtype(lang.sig, sub, sup);
	if (co) {
		std::cout << "witness: " << dtse::print_term(co->witness) << "\n";
	} else {
		std::cout << "absent\n";
	}
	return exit_ok;
}

int cmd_resolve(const std::string& path, const std::string& lexicon_path,
                std::size_t max_readings, bool want_trace,
                const std::string& format) {
	loaded_language lang = load_language(lexicon_path);
	resolve_run run =
	    run_discourse(lang, path, max_readings, want_trace);
	print_trace(run.trace);
	if (format == "structured") {
		std::cout << dtse::report_json(run.report);
	} else {
		std::cout << dtse::report_text(run.report);
	}
	return exit_ok;
}

int cmd_export_fol(const std::string& path,
                   const std::string& lexicon_path,
                   std::size_t max_readings, bool want_trace,
                   const std::string& format) {
	loaded_language lang = load_language(lexicon_path);
	resolve_run run =
	    run_discourse(lang, path, max_readings, want_trace);
	print_trace(run.trace);
	if (format == "structured") {
		std::cout << "[\n";
		for (std::size_t i = 0; i < run.report.readings.size(); ++i) {
			const auto& r = run.report.readings[i];
			std::cout << "  {\"label\": \"" << r.label
			          << "\", \"formula\": \""
			          << dtse::fol_to_string(r.formula) << "\"}"
			          << (i + 1 < run.report.readings.size() ? "," : "")
			          << "\n";
		}
		std::cout << "]\n";
	} else {
		for (const auto& r : run.report.readings) {
			if (!r.label.empty()) {
				std::cout << r.label << ": ";
			}
			std::cout << dtse::fol_to_string(r.formula) << "\n";
		}
	}
	return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
	CLI::App app{
	    "Dependent-type event semantics: type checking, subtyping, "
	    "anaphora resolution, and first-order export"};
	app.require_subcommand(1);

	std::string lexicon_path;
	std::string term_arg;
	std::string sub_arg;
	std::string sup_arg;
	std::string discourse_path;
	std::size_t max_readings = 0;
	bool want_trace = false;
	std::string format = "text";

	auto* check = app.add_subcommand(
	    "check", "Infer and print the type of a term (file or inline)");
	check->add_option("term", term_arg, "term file or inline term")
	    ->required();
	check->add_option("--lexicon", lexicon_path, "extra word list file");

	auto* subtype = app.add_subcommand(
	    "subtype", "Decide subtyping between two types and print the "
	               "witness, or `absent`");
	subtype->add_option("sub", sub_arg, "candidate subtype")->required();
	subtype->add_option("sup", sup_arg, "candidate supertype")->required();
	subtype->add_option("--lexicon", lexicon_path, "extra word list file");

	auto add_discourse_options = [&](CLI::App* cmd) {
		cmd->add_option("discourse", discourse_path,
		                "discourse file, one sentence per line")
		    ->required();
		cmd->add_option("--lexicon", lexicon_path, "extra word list file");
		cmd->add_option("--max-readings", max_readings,
		                "keep at most N readings (0: all)");
		cmd->add_flag("--trace", want_trace,
		              "print resolution steps to stderr");
		cmd->add_option("--format", format, "text or structured")
		    ->check(CLI::IsMember({"text", "structured"}));
	};

	auto* resolve = app.add_subcommand(
	    "resolve", "Resolve a discourse's anaphora and print the report");
	add_discourse_options(resolve);

	auto* export_fol = app.add_subcommand(
	    "export-fol",
	    "Resolve a discourse and print one first-order formula per "
	    "reading");
	add_discourse_options(export_fol);

	CLI11_PARSE(app, argc, argv);

	try {
		if (check->parsed()) {
			return cmd_check(term_arg, lexicon_path);
		}
		if (subtype->parsed()) {
			return cmd_subtype(sub_arg, sup_arg, lexicon_path);
		}
		if (resolve->parsed()) {
			return cmd_resolve(discourse_path, lexicon_path, max_readings,
			                   want_trace, format);
		}
		if (export_fol->parsed()) {
			return cmd_export_fol(discourse_path, lexicon_path,
			                      max_readings, want_trace, format);
		}
	} catch (const dtse::no_resolution& e) {
		std::cout << "NoResolution at @_" << e.index << "\n";
		std::cerr << e.what() << "\n";
		return exit_no_resolution;
	} catch (const std::exception& e) {
		std::cerr << "error: " << e.what() << "\n";
		return exit_error;
	}
	return exit_error;
}
