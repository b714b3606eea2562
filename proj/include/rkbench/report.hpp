#pragma once

#include <algorithm>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace rkbench {

// Outcome of a rule-by-rule check. Failures are entries, not exceptions.
struct Report {
  struct Entry {
    std::string rule;
    bool ok = true;
    std::string detail;
  };

  std::string title;
  std::vector<Entry> entries;
  // Computed facts (key, value) recorded alongside the rule outcomes.
  std::vector<std::pair<std::string, std::string>> facts;

  void check(std::string rule, bool ok, std::string detail = {}) {
    entries.push_back({std::move(rule), ok, std::move(detail)});
  }
  void fact(std::string key, std::string value) {
    facts.emplace_back(std::move(key), std::move(value));
  }

  bool passed() const {
    return std::all_of(entries.begin(), entries.end(),
                       [](const Entry& e) { return e.ok; });
  }

  std::vector<Entry> violations() const {
    std::vector<Entry> out;
    for (const auto& e : entries)
      if (!e.ok) out.push_back(e);
    return out;
  }

  bool failed(const std::string& rule) const {
    return std::any_of(entries.begin(), entries.end(), [&](const Entry& e) {
      return !e.ok && e.rule == rule;
    });
  }

  const std::string* find_fact(const std::string& key) const {
    for (const auto& [k, v] : facts)
      if (k == key) return &v;
    return nullptr;
  }

  void merge(const Report& other) {
    entries.insert(entries.end(), other.entries.begin(), other.entries.end());
    facts.insert(facts.end(), other.facts.begin(), other.facts.end());
  }

  // Human-readable table.
  std::string to_text() const {
    std::ostringstream out;
    if (!title.empty()) out << title << "\n";
    for (const auto& e : entries) {
      out << (e.ok ? "  pass  " : "  FAIL  ") << e.rule;
      if (!e.detail.empty()) out << "  (" << e.detail << ")";
      out << "\n";
    }
    for (const auto& [k, v] : facts) out << "  " << k << ": " << v << "\n";
    out << "  result: " << (passed() ? "pass" : "fail") << "\n";
    return out.str();
  }

  // Line-oriented key=value records.
  std::string to_machine() const {
    std::ostringstream out;
    for (const auto& e : entries) {
      out << "rule=" << e.rule << " ok=" << (e.ok ? 1 : 0);
      if (!e.detail.empty()) out << " detail=\"" << e.detail << "\"";
      out << "\n";
    }
    for (const auto& [k, v] : facts) out << "fact." << k << "=" << v << "\n";
    out << "passed=" << (passed() ? 1 : 0) << "\n";
    return out.str();
  }
};

}  // namespace rkbench
