#include "doctest.h"

#include <sstream>

#include "aamrp/metrics.hpp"
#include "aamrp/replay.hpp"
#include "aamrp/sim.hpp"

using namespace aamrp;

TEST_SUITE("metrics") {

TEST_CASE("overhead is the received control packet count") {
    RunCounters c;
    CHECK(overhead(c) == 0);
    c.control_packets_received = 573;
    CHECK(overhead(c) == 573);
}

TEST_CASE("a single JOIN heard by three neighbors counts three receptions") {
    RunConfig cfg;
    cfg.world.n_nodes = 4;
    cfg.world.k_hops = 1; // no relays, one flood hop
    cfg.world.min_speed = 0.0;
    cfg.world.max_speed = 0.0;
    cfg.world.radio_range = 100.0;
    cfg.world.sim_time = 0.5; // before the first join timeout
    cfg.traffic.sources = 1;
    cfg.traffic.start = 100.0;
    cfg.transport.density_loss = 0.0;
    cfg.pinned_subscribers = {1};
    Simulator sim(cfg);
    sim.place_nodes({{0, 0}, {50, 0}, {50, 50}, {0, 50}});
    sim.run();
    const auto& by_kind = sim.counters().received_by_kind;
    REQUIRE(by_kind.count(MessageKind::Join) == 1);
    CHECK(by_kind.at(MessageKind::Join) == 3);
}

TEST_CASE("routing load divides sends by data received") {
    RunCounters c;
    c.routing_packets_sent = 100;
    c.data_packets_received_total = 1000;
    CHECK(*routing_load(c) == doctest::Approx(0.1));
    c.data_packets_received_total = 0;
    CHECK(!routing_load(c).has_value()); // N/A, never a division by zero
}

TEST_CASE("average delay over unique receipts") {
    RunCounters c;
    CHECK(!avg_delay(c).has_value());
    c.delay_sum = 0.010 + 0.030;
    c.delay_samples = 2;
    CHECK(*avg_delay(c) == doctest::Approx(0.020));
}

TEST_CASE("pdf percentage and its guards") {
    RunCounters c;
    CHECK(!pdf_percent(c).has_value());
    c.expected_receipts = 10;
    c.data_receipts_unique = 5;
    CHECK(*pdf_percent(c) == doctest::Approx(50.0));
    c.data_receipts_unique = 10;
    CHECK(*pdf_percent(c) == doctest::Approx(100.0));
}

TEST_CASE("csv output is sorted, has a header, and marks undefined values") {
    std::vector<MetricsRow> rows;
    MetricsRow a;
    a.protocol = "flooding";
    a.n_nodes = 50;
    a.group_size = 2;
    a.seed = 2;
    a.overhead = 10;
    rows.push_back(a); // load/delay/pdf all N/A
    MetricsRow b;
    b.protocol = "aamrp";
    b.n_nodes = 25;
    b.group_size = 1;
    b.seed = 1;
    b.overhead = 5;
    b.load = 0.5;
    b.delay_s = 0.01;
    b.pdf_pct = 90.0;
    rows.push_back(b);

    const std::string csv = metrics_csv(rows);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "protocol,n_nodes,group_size,seed,overhead,load,delay_s,pdf_pct");
    std::getline(in, line);
    CHECK(line.substr(0, 6) == "aamrp,"); // sorted before flooding
    CHECK(csv.find("N/A") != std::string::npos);
    CHECK(csv.find(",mean,") != std::string::npos);
}

TEST_CASE("seed means equal the arithmetic mean of per-seed values") {
    std::vector<MetricsRow> rows;
    const double pdfs[3] = {40.0, 50.0, 75.0};
    for (int i = 0; i < 3; ++i) {
        MetricsRow r;
        r.protocol = "aamrp";
        r.n_nodes = 25;
        r.group_size = 2;
        r.seed = static_cast<std::uint64_t>(i + 1);
        r.overhead = 100 + static_cast<std::uint64_t>(i);
        r.pdf_pct = pdfs[i];
        rows.push_back(r);
    }
    const std::string csv = metrics_csv(rows);
    std::istringstream in(csv);
    std::string line;
    std::string mean_line;
    while (std::getline(in, line))
        if (line.find(",mean,") != std::string::npos) mean_line = line;
    REQUIRE(!mean_line.empty());
    // fields: protocol,n_nodes,group_size,seed,overhead,load,delay,pdf
    std::vector<std::string> fields;
    std::stringstream ss(mean_line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    REQUIRE(fields.size() == 8);
    CHECK(std::stod(fields[4]) == doctest::Approx(101.0).epsilon(1e-9));
    CHECK(std::stod(fields[7]) == doctest::Approx(55.0).epsilon(1e-9));
}

TEST_CASE("a trace replays to exactly the live counters") {
    for (Protocol p : {Protocol::Aamrp, Protocol::Flooding, Protocol::SharedTree}) {
        RunConfig cfg;
        cfg.protocol = p;
        cfg.world.n_nodes = 16;
        cfg.world.sim_time = 12.0;
        cfg.world.rng_seed = 9;
        cfg.group_size = 3;
        TraceWriter trace;
        Simulator sim(cfg, &trace);
        sim.run();

        const TraceReplay replay = replay_trace_text(trace.str());
        const RunCounters& live = sim.counters();
        const RunCounters& re = replay.counters;
        CHECK(replay.protocol == to_string(p));
        CHECK(re.control_packets_received == live.control_packets_received);
        CHECK(re.routing_packets_sent == live.routing_packets_sent);
        CHECK(re.data_packets_sent_by_sources == live.data_packets_sent_by_sources);
        CHECK(re.data_receipts_unique == live.data_receipts_unique);
        CHECK(re.data_packets_received_total == live.data_packets_received_total);
        CHECK(re.expected_receipts == live.expected_receipts);
        CHECK(re.delay_samples == live.delay_samples);
        CHECK(re.delay_sum == doctest::Approx(live.delay_sum).epsilon(1e-9));
        for (const auto& [kind, count] : live.received_by_kind) {
            REQUIRE(re.received_by_kind.count(kind) == 1);
            CHECK(re.received_by_kind.at(kind) == count);
        }
    }
}

TEST_CASE("replaying the same trace twice gives identical metrics") {
    RunConfig cfg;
    cfg.world.n_nodes = 12;
    cfg.world.sim_time = 8.0;
    cfg.group_size = 2;
    TraceWriter trace;
    Simulator sim(cfg, &trace);
    sim.run();
    const TraceReplay r1 = replay_trace_text(trace.str());
    const TraceReplay r2 = replay_trace_text(trace.str());
    CHECK(r1.counters.control_packets_received == r2.counters.control_packets_received);
    CHECK(r1.counters.delay_sum == r2.counters.delay_sum);
    CHECK(r1.counters.data_receipts_unique == r2.counters.data_receipts_unique);
    CHECK(r1.counters.expected_receipts == r2.counters.expected_receipts);
}

} // TEST_SUITE
