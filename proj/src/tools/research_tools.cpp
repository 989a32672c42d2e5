// Copyright 2026 The ESG Agent Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <map>
#include <sstream>

#include "esg/common/fenced.hpp"
#include "esg/common/text.hpp"
#include "esg/tools/builtin.hpp"
#include "handlers.hpp"

namespace esg::tools::detail {

namespace {

SearchBackend& backend_of(ToolContext& ctx) {
  if (!ctx.env().search) throw Error(ErrorKind::kBackendUnavailable, "no search backend is configured");
  return *ctx.env().search;
}

std::optional<int> year_arg(const Json& args) {
  const auto y = opt_int(args, "filter_year");
  return y ? std::optional<int>(static_cast<int>(*y)) : std::nullopt;
}

Evidence evidence_of(const SearchResult& r) {
  return {r.url, r.title, r.content ? r.snippet + "\n\n" + *r.content : r.snippet};
}

}  // namespace

ToolResult run_retriever(const ToolCall& call, ToolContext& ctx, const std::vector<const ToolRecord*>&) {
  const auto query = required_string(call.args, "query");
  const auto& index = ctx.env().index;
  if (!index || index->empty()) throw Error(ErrorKind::kEmptyIndex, "no local knowledge index is loaded");
  const auto top_k = opt_int(call.args, "top_k").value_or(static_cast<std::int64_t>(ctx.env().retrieval_top_k));
  if (top_k < 1) throw Error(ErrorKind::kArgValidation, "top_k must be at least 1");
  const auto mode = opt_string(call.args, "mode") ? retrieval::retrieval_mode_from_string(*opt_string(call.args, "mode"))
                                                  : ctx.env().retrieval_mode;
  const auto report = index->retrieve(query, static_cast<std::size_t>(top_k), mode, ctx.llm().gateway(), ctx.workdir());
  ToolResult r = ToolResult::success("Retrieved " + std::to_string(report.hits.size()) + " documents for query: " +
                                     query + "\n\nReport saved to: " + report.saved_path.filename().string());
  r.artifact_paths.push_back(report.saved_path);
  for (const auto& h : report.hits) {
    const auto* c = index->find_chunk(h.chunk_id);
    r.evidence.push_back({h.uri(), h.title, c ? c->text : h.snippet});
  }
  return r;
}

ToolResult run_web_search(const ToolCall& call, ToolContext& ctx, const std::vector<const ToolRecord*>&) {
  const auto query = required_string(call.args, "query");
  auto limit = ctx.env().max_search_results;
  if (const auto m = opt_int(call.args, "max_results"); m && *m > 0) {
    limit = std::min(limit, static_cast<std::size_t>(*m));
  }
  const auto results = filter_results(backend_of(ctx).search(query), year_arg(call.args), limit);
  std::ostringstream out;
  out << "Found " << results.size() << " results for query: " << query << "\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    out << "\n" << (i + 1) << ". " << r.title;
    if (r.year) out << " (" << *r.year << ")";
    out << "\n   " << r.url << "\n   " << r.snippet << "\n";
  }
  ToolResult tr = ToolResult::success(out.str());
  for (const auto& r : results) tr.evidence.push_back(evidence_of(r));
  return tr;
}

namespace {

constexpr const char* kResearcherPrompt =
    "You are a deep research agent answering one research task from web sources. Each turn, reply with "
    "exactly one fenced block:\n"
    "```search\n{\"query\": \"...\"}\n```\n"
    "to run another web search, or\n"
    "```synthesis\n{\"answer_found\": true, \"summary\": \"...\", \"introduction\": \"...\", "
    "\"findings\": [{\"heading\": \"...\", \"body\": \"...\"}]}\n```\n"
    "to finish. Cite sources inline as [n] using the source numbers given to you.";

class SourceBook {
 public:
  explicit SourceBook(SearchBackend& backend) : backend_(backend) {}

  // Searches, fetches page text and returns a listing of the new sources.
  std::string gather(const std::string& query, std::optional<int> year, std::size_t limit) {
    auto results = filter_results(backend_.search(query), year, limit);
    std::ostringstream out;
    std::size_t added = 0;
    for (auto& r : results) {
      if (std::any_of(sources_.begin(), sources_.end(), [&](const SearchResult& s) { return s.url == r.url; })) continue;
      if (!r.content) r.content = backend_.fetch(r.url);
      sources_.push_back(r);
      ++added;
      out << "[" << sources_.size() << "] " << r.title << " <" << r.url << ">\n"
          << text::truncate(r.content.value_or(r.snippet), 1500) << "\n\n";
    }
    if (added == 0) return "No new sources for \"" + query + "\".\n";
    return out.str();
  }

  const std::vector<SearchResult>& sources() const { return sources_; }

  std::map<int, std::string> uris() const {
    std::map<int, std::string> m;
    for (std::size_t i = 0; i < sources_.size(); ++i) m[static_cast<int>(i + 1)] = sources_[i].url;
    return m;
  }

 private:
  SearchBackend& backend_;
  std::vector<SearchResult> sources_;
};

std::string render_research(const std::string& title, const Json& synthesis, const SourceBook& book) {
  const auto uris = book.uris();
  std::ostringstream md;
  md << "# " << title << "\n\n## Introduction\n\n"
     << link_citations(synthesis.value("introduction", synthesis.value("summary", std::string())), uris, nullptr, false)
     << "\n\n";
  if (synthesis.contains("findings") && synthesis["findings"].is_array()) {
    for (const auto& f : synthesis["findings"]) {
      if (!f.is_object()) continue;
      md << "## " << f.value("heading", std::string("Findings")) << "\n\n"
         << link_citations(f.value("body", std::string()), uris, nullptr, false) << "\n\n";
    }
  }
  md << "## References\n\n";
  for (std::size_t i = 0; i < book.sources().size(); ++i) {
    const auto& s = book.sources()[i];
    md << "[" << (i + 1) << "](" << s.url << ") " << s.title << "\n\n";
  }
  return md.str();
}

}  // namespace

ToolResult run_deep_researcher(const ToolCall& call, ToolContext& ctx, const std::vector<const ToolRecord*>& prior) {
  const auto task = required_string(call.args, "task");
  const auto year = year_arg(call.args);
  const auto title = opt_string(call.args, "title").value_or("Research: " + text::truncate(task, 60));
  const auto call_id = sanitize_id(opt_string(call.args, "call_id").value_or(call.call_id));
  const auto limit = ctx.env().max_search_results;
  SourceBook book(backend_of(ctx));

  std::ostringstream first;
  first << "Research task: " << task << "\n";
  if (year) first << "Restrict to material from " << *year << ".\n";
  if (!prior.empty()) first << "\nEarlier research in this run:\n" << prior_digest(prior);
  first << "\nSources:\n" << book.gather(task, year, limit);
  std::vector<llm::ChatMessage> messages = {llm::ChatMessage::system(kResearcherPrompt),
                                            llm::ChatMessage::user(first.str())};

  const int budget = std::max(1, ctx.env().researcher_budget);
  for (int turn = 1; turn <= budget; ++turn) {
    const auto reply = ctx.llm().complete("deep_researcher", messages);
    messages.push_back(llm::ChatMessage::assistant(reply.content.empty() ? "(empty)" : reply.content));
    const auto synthesis = find_json(reply.content, "synthesis");
    if (synthesis && synthesis->is_object() && synthesis->contains("summary")) {
      const auto path = ctx.workdir() / ("research_" + call_id + ".md");
      write_file(path, render_research(title, *synthesis, book));
      const bool found = synthesis->value("answer_found", true);
      ToolResult r = ToolResult::success("Deep research summary: Answer Found: " + std::string(found ? "Yes" : "No") +
                                         ". " + synthesis->value("summary", std::string()) +
                                         "\n\nReport saved to: " + path.filename().string());
      r.artifact_paths.push_back(path);
      for (const auto& s : book.sources()) r.evidence.push_back(evidence_of(s));
      return r;
    }
    std::string next;
    const auto search = find_json(reply.content, "search");
    if (search && search->is_object() && search->contains("query") && (*search)["query"].is_string()) {
      try {
        next = "Sources:\n" + book.gather((*search)["query"].get<std::string>(), year, limit);
      } catch (const Error& e) {
        next = std::string("Search failed: ") + e.what();
      }
    } else {
      next = "Reply with exactly one ```search or ```synthesis block.";
    }
    messages.push_back(llm::ChatMessage::user(next));
  }
  throw Error(ErrorKind::kBudgetExhausted,
              "deep_researcher used its " + std::to_string(budget) + " turns without a synthesis");
}

namespace {

constexpr const char* kAnalyzerPrompt =
    "You analyse documents one part at a time. After reading each part, reply with a JSON object: "
    "{\"status\": \"continue\", \"notes\": \"...\"} to read the next part, or "
    "{\"status\": \"final\", \"summary\": \"...\"} once you can answer the task.";

}  // namespace

ToolResult run_deep_analyzer(const ToolCall& call, ToolContext& ctx, const std::vector<const ToolRecord*>&) {
  const auto task = required_string(call.args, "task");
  const auto& paths = call.args["file_paths"];
  if (paths.empty()) throw Error(ErrorKind::kArgValidation, "deep_analyzer needs at least one file path");
  std::vector<retrieval::Chunk> parts;
  std::vector<Evidence> evidence;
  for (const auto& p : paths) {
    if (!p.is_string()) throw Error(ErrorKind::kArgValidation, "file_paths entries must be strings");
    const auto path = ctx.resolve_inside(p.get<std::string>());
    const auto doc = retrieval::ingest(path, {}, ctx.env().extractors);
    for (auto& c : retrieval::chunk(doc, ctx.env().analyzer_chunk_size, 0)) parts.push_back(std::move(c));
    evidence.push_back({"file://" + path.string(), doc.title, doc.body});
  }
  std::vector<llm::ChatMessage> messages = {llm::ChatMessage::system(kAnalyzerPrompt)};
  const int budget = std::max(1, ctx.env().analyzer_budget);
  std::vector<std::string> notes;
  for (int turn = 0; turn < budget; ++turn) {
    std::ostringstream user;
    if (turn == 0) user << "Task: " << task << "\n\n";
    if (static_cast<std::size_t>(turn) < parts.size()) {
      user << "Part " << (turn + 1) << " of " << parts.size() << ":\n" << parts[static_cast<std::size_t>(turn)].text;
    } else {
      user << "All parts have been read. Give your final answer.";
    }
    messages.push_back(llm::ChatMessage::user(user.str()));
    const auto reply = ctx.llm().complete("deep_analyzer", messages);
    messages.push_back(llm::ChatMessage::assistant(reply.content.empty() ? "(empty)" : reply.content));
    const auto j = find_json(reply.content);
    if (j && j->is_object() && j->value("status", std::string()) == "continue") {
      if (auto n = j->value("notes", std::string()); !n.empty()) notes.push_back(n);
      continue;
    }
    std::string summary = (j && j->is_object()) ? j->value("summary", std::string()) : text::trim(reply.content);
    if (summary.empty()) summary = text::trim(reply.content);
    ToolResult r = ToolResult::success("Deep analysis summary: " + summary);
    r.evidence = std::move(evidence);
    return r;
  }
  throw Error(ErrorKind::kBudgetExhausted,
              "deep_analyzer used its " + std::to_string(budget) + " turns without a final answer");
}

}  // namespace esg::tools::detail
