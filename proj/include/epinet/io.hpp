/******************************************************************/
// io.hpp
//
// Plain-text file formats:
//   -- event trace      CSV "time,kind,p1,p2" with kind INF|REC|ON|OFF;
//                       p2 empty for epidemic events; header required
//   -- initial state    "N <n>" line, optional "I <id>..." line listing
//                       initially infectious persons, "E <a> <b>" edge
//                       lines
//   -- status reports   CSV "time,person,ill" (one row per person per
//                       report time, ill in {0,1})
//   -- labels           CSV "time,person,internal" for open-population
//                       infection labeling
//   -- chain            CSV with a parameter-name header and one row of
//                       draws per retained iteration
//
// All writers are atomic (write to <path>.tmp, then rename) so partial
// files are never observed. Readers throw ParseError with the offending
// line number.
/******************************************************************/
#ifndef EPINET_IO_HPP
#define EPINET_IO_HPP

#include <string>
#include <vector>

#include "epinet/core.hpp"

namespace epinet {

class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

void write_trace(const std::string& path, const EventTrace& events);
EventTrace read_trace(const std::string& path);

void write_initial_state(const std::string& path, const ProcessState& g0);
ProcessState read_initial_state(const std::string& path);

void write_reports(const std::string& path, const std::vector<StatusReport>& reports);
// n = population size (rows carry person ids, so the reader needs it only
// to size the indicator vectors)
std::vector<StatusReport> read_reports(const std::string& path, int n);

// labels aligned with the infection events of a trace
void write_labels(const std::string& path, const EventTrace& events,
                  const std::vector<std::uint8_t>& internal);
std::vector<std::uint8_t> read_labels(const std::string& path, const EventTrace& events);

void write_hidden(const std::string& path, const std::vector<std::pair<int, double>>& hidden);
std::vector<std::pair<int, double>> read_hidden(const std::string& path);

void write_chain_csv(const std::string& path, const std::vector<std::string>& names,
                     const std::vector<std::vector<double>>& rows);
void read_chain_csv(const std::string& path, std::vector<std::string>& names,
                    std::vector<std::vector<double>>& rows);

// generic atomic text write used by the CLI for tables and manifests
void write_text_atomic(const std::string& path, const std::string& content);

} // namespace epinet

#endif
