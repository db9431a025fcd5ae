#include "dtse/report.h"

#include <sstream>

#include <json.hpp>

#include "dtse/sexpr.h"

namespace dtse {

std::string report_text(const run_report& report) {
	std::ostringstream out;
	out << "discourse:\n";
	std::istringstream lines(report.source);
	for (std::string line; std::getline(lines, line);) {
		out << "  " << line << "\n";
	}
	for (const auto& goal : report.goals) {
		out << "\nsite @" << goal.index << "\n";
		out << "  context: " << display_term(goal.context_type) << "\n";
		out << "  goal:    " << display_term(goal.goal_type) << "\n";
	}
	if (report.readings.empty()) {
		out << "\nno readings\n";
		return out.str();
	}
	for (std::size_t i = 0; i < report.readings.size(); ++i) {
		const auto& reading = report.readings[i];
		out << "\nreading " << i + 1;
		if (!reading.label.empty()) {
			out << " [" << reading.label << "]";
		}
		out << "\n";
		out << "  fol:            " << fol_to_string(reading.formula)
		    << "\n";
		out << "  interpretation: "
		    << display_term(reading.interpretation) << "\n";
	}
	return out.str();
}

std::string report_json(const run_report& report) {
	nlohmann::ordered_json doc;
	doc["source"] = report.source;
	doc["goals"] = nlohmann::ordered_json::array();
	for (const auto& goal : report.goals) {
		nlohmann::ordered_json g;
		g["index"] = goal.index;
		g["context"] = print_term(goal.context_type);
		g["goal"] = print_term(goal.goal_type);
		doc["goals"].push_back(std::move(g));
	}
	doc["readings"] = nlohmann::ordered_json::array();
	for (const auto& reading : report.readings) {
		nlohmann::ordered_json r;
		r["label"] = reading.label;
		r["formula"] = fol_to_string(reading.formula);
		r["interpretation"] = print_term(reading.interpretation);
		doc["readings"].push_back(std::move(r));
	}
	return doc.dump(2) + "\n";
}

run_report report_from_json(const std::string& text) {
	nlohmann::ordered_json doc = nlohmann::ordered_json::parse(text);
	run_report report;
	report.source = doc.at("source").get<std::string>();
	for (const auto& g : doc.at("goals")) {
		goal_summary goal;
		goal.index = g.at("index").get<std::size_t>();
		goal.context_type = parse_term(g.at("context").get<std::string>());
		goal.goal_type = parse_term(g.at("goal").get<std::string>());
		report.goals.push_back(std::move(goal));
	}
	for (const auto& r : doc.at("readings")) {
		reading_entry reading;
		reading.label = r.at("label").get<std::string>();
		reading.formula = fol_parse(r.at("formula").get<std::string>());
		reading.interpretation =
		    parse_term(r.at("interpretation").get<std::string>());
		report.readings.push_back(std::move(reading));
	}
	return report;
}

} // namespace dtse
