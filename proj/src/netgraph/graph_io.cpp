#include <istream>
#include <sstream>
#include <string>

#include "ncga/error.hpp"
#include "ncga/netgraph.hpp"

namespace ncga {

namespace {

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
  throw ParseError("line " + std::to_string(line_no) + ": " + what);
}

std::uint64_t read_uint(std::istringstream& in, std::size_t line_no, const char* field) {
  std::string tok;
  if (!(in >> tok)) fail(line_no, std::string("missing ") + field);
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(tok, &pos);
  } catch (const std::exception&) {
    fail(line_no, std::string("bad ") + field + " '" + tok + "'");
  }
  if (pos != tok.size() || tok.front() == '-') fail(line_no, std::string("bad ") + field + " '" + tok + "'");
  return v;
}

void expect_word(std::istringstream& in, std::size_t line_no, const char* word) {
  std::string tok;
  if (!(in >> tok) || tok != word) fail(line_no, std::string("expected '") + word + "'");
}

void expect_end(std::istringstream& in, std::size_t line_no) {
  std::string tok;
  if (in >> tok) fail(line_no, "trailing token '" + tok + "'");
}

}  // namespace

GraphFile parse_graph(std::istream& in, bool validate_rate) {
  std::size_t n_nodes = 0, n_links = 0;
  NodeId source = 0;
  std::uint32_t rate = 0;
  bool have_header = false;
  std::vector<NodeId> receivers;
  std::vector<LinkSpec> links;
  std::vector<bool> seen;
  std::vector<ChurnEvent> churn;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string kind;
    if (!(fields >> kind)) continue;

    if (kind == "nodes") {
      if (have_header) fail(line_no, "duplicate header");
      n_nodes = read_uint(fields, line_no, "node count");
      expect_word(fields, line_no, "links");
      n_links = read_uint(fields, line_no, "link count");
      expect_word(fields, line_no, "source");
      source = static_cast<NodeId>(read_uint(fields, line_no, "source"));
      expect_word(fields, line_no, "rate");
      rate = static_cast<std::uint32_t>(read_uint(fields, line_no, "rate"));
      links.assign(n_links, {});
      seen.assign(n_links, false);
      have_header = true;
    } else if (!have_header) {
      fail(line_no, "header 'nodes N links M source S rate R' must come first");
    } else if (kind == "recv") {
      receivers.push_back(static_cast<NodeId>(read_uint(fields, line_no, "receiver")));
    } else if (kind == "link") {
      const auto id = read_uint(fields, line_no, "link id");
      if (id >= n_links) fail(line_no, "link id " + std::to_string(id) + " >= link count");
      if (seen[id]) fail(line_no, "duplicate link id " + std::to_string(id));
      seen[id] = true;
      links[id].tail = static_cast<NodeId>(read_uint(fields, line_no, "tail"));
      links[id].head = static_cast<NodeId>(read_uint(fields, line_no, "head"));
      links[id].capacity = static_cast<std::uint32_t>(read_uint(fields, line_no, "capacity"));
    } else if (kind == "churn") {
      ChurnEvent e;
      e.time = static_cast<std::uint32_t>(read_uint(fields, line_no, "time"));
      e.link = static_cast<LinkId>(read_uint(fields, line_no, "link id"));
      std::string action;
      if (!(fields >> action) || (action != "down" && action != "up")) fail(line_no, "churn action must be down|up");
      e.action = action == "down" ? ChurnAction::down : ChurnAction::up;
      churn.push_back(e);
    } else {
      fail(line_no, "unknown record '" + kind + "'");
    }
    expect_end(fields, line_no);
  }
  if (!have_header) throw ParseError("missing header");
  for (std::size_t i = 0; i < n_links; ++i) {
    if (!seen[i]) throw ParseError("link " + std::to_string(i) + " missing");
  }
  for (const ChurnEvent& e : churn) {
    if (e.link >= n_links) throw UnknownLink("churn names unknown link " + std::to_string(e.link));
  }

  GraphFile file;
  file.network = validate_rate ? build_network(n_nodes, links, source, std::move(receivers), rate)
                               : build_network_unchecked(n_nodes, links, source, std::move(receivers), rate);
  file.churn = ChurnSchedule(std::move(churn));
  return file;
}

GraphFile parse_graph(const std::string& text, bool validate_rate) {
  std::istringstream in(text);
  return parse_graph(in, validate_rate);
}

std::string serialize_graph(const GraphFile& file) {
  const Network& net = file.network;
  std::ostringstream out;
  out << "nodes " << net.node_count() << " links " << net.links().size() << " source " << net.source()
      << " rate " << net.target_rate() << '\n';
  for (NodeId r : net.receivers()) out << "recv " << r << '\n';
  for (const Link& l : net.links()) {
    out << "link " << l.id << ' ' << l.tail << ' ' << l.head << ' ' << l.capacity << '\n';
  }
  for (const ChurnEvent& e : file.churn.events()) {
    out << "churn " << e.time << ' ' << e.link << ' ' << (e.action == ChurnAction::down ? "down" : "up") << '\n';
  }
  return out.str();
}

std::string serialize_graph(const Network& net) { return serialize_graph(GraphFile{net, {}}); }

}  // namespace ncga
