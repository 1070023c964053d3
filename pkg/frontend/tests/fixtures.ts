/** Payload fixtures mirroring the backend's JSON responses. */

import type {
  GoalPayload,
  GraphPayload,
  SingleTimeseries,
  SubAreaPayload,
} from "../src/types.js";

export const GRAPH: GraphPayload = {
  ref: "InnovationLeaders",
  year: null,
  locale: "de-AT",
  nodes: [
    {
      id: "framework_conditions",
      kind: "area",
      name: "Framework Conditions for RTI",
      sub_area_ids: ["education"],
    },
    {
      id: "core_rti_system",
      kind: "area",
      name: "Core RTI System",
      sub_area_ids: ["tertiary_education", "academic_research"],
    },
    {
      id: "crosscutting_issues",
      kind: "area",
      name: "RTI Cross-cutting Issues",
      sub_area_ids: ["digitization", "circular_economy"],
    },
    {
      id: "education",
      kind: "sub_area",
      name: "Education",
      area_id: "framework_conditions",
      year: 2022,
      band: "Green",
      percent: 125.6,
      x: 60,
      y: 50,
    },
    {
      id: "tertiary_education",
      kind: "sub_area",
      name: "Tertiary Education",
      area_id: "core_rti_system",
      year: 2022,
      band: "LightGreen",
      percent: 101.2,
      x: 180,
      y: 50,
    },
    {
      id: "academic_research",
      kind: "sub_area",
      name: "Academic Research",
      area_id: "core_rti_system",
      year: 2022,
      band: "Green",
      percent: 145.4,
      x: 300,
      y: 50,
    },
    {
      id: "digitization",
      kind: "sub_area",
      name: "Digitization",
      area_id: "crosscutting_issues",
      year: 2022,
      band: "Orange",
      percent: 75.69,
      x: 60,
      y: 150,
    },
    {
      id: "circular_economy",
      kind: "sub_area",
      name: "Circular Economy",
      area_id: "crosscutting_issues",
      year: 2022,
      band: "InsufficientData",
      percent: null,
      x: 180,
      y: 150,
    },
  ],
  edges: [
    ["education", "tertiary_education"],
    ["education", "digitization"],
    ["tertiary_education", "digitization"],
  ],
  goals: [
    {
      id: "desi_ranking",
      title:
        "Ranking improvement in DESI sub-components from top 13 to top 5",
      strategy_id: "rti2030",
      mapped_sub_areas: ["education", "tertiary_education", "digitization"],
      achievement_percent: 25.0,
      year: 2022,
    },
    {
      id: "gii_achievement",
      title: "Rank improvement GII from 19 to top 10",
      strategy_id: "rti2030",
      mapped_sub_areas: ["academic_research"],
      achievement_percent: 56.0,
      year: 2023,
    },
  ],
};

function subAreaPayload(
  ref: string,
  percents: { ict: number; egov: number; broadband: number },
): SubAreaPayload {
  const composite = (percents.ict + percents.egov) / 2;
  const overall = (composite + percents.broadband) / 2;
  const band = (p: number) =>
    p >= 105
      ? "Green"
      : p >= 95
        ? "LightGreen"
        : p >= 85
          ? "Yellow"
          : p >= 70
            ? "Orange"
            : "Red";
  return {
    id: "digitization",
    name: "Digitization",
    area_id: "crosscutting_issues",
    ref,
    year: 2022,
    overall: { percent: overall, band: band(overall) },
    overall_history: [
      { year: 2020, percent: overall - 1, band: band(overall - 1) },
      { year: 2021, percent: overall - 0.5, band: band(overall - 0.5) },
      { year: 2022, percent: overall, band: band(overall) },
    ],
    indicators: [
      {
        id: "digital_economy_index",
        name: "Digital economy index",
        unit: "index",
        description: "",
        taxonomy: "Output",
        polarity: "HigherIsBetter",
        is_composite: true,
        source_url: "https://stats.example.org/digital_economy_index",
        score: { percent: composite, band: band(composite) },
        children: [
          {
            id: "ict_specialists",
            name: "ICT specialists share",
            unit: "% employed",
            description: "",
            taxonomy: "Input",
            polarity: "HigherIsBetter",
            is_composite: false,
            source_url: "https://stats.example.org/ict_specialists",
            score: { percent: percents.ict, band: band(percents.ict) },
          },
          {
            id: "egov_users",
            name: "E-government users",
            unit: "% adults",
            description: "",
            taxonomy: "Output",
            polarity: "HigherIsBetter",
            is_composite: false,
            source_url: "https://stats.example.org/egov_users",
            score: { percent: percents.egov, band: band(percents.egov) },
          },
        ],
      },
      {
        id: "broadband_gap",
        name: "Broadband coverage gap",
        unit: "% households",
        description: "",
        taxonomy: "Input",
        polarity: "LowerIsBetter",
        is_composite: false,
        source_url: "https://stats.example.org/broadband_gap",
        score: {
          percent: percents.broadband,
          band: band(percents.broadband),
        },
      },
    ],
    interpretation_text:
      "Digitization shows a mixed picture compared with the leaders.",
    goals: [{ id: "desi_ranking", title: "DESI ranking improvement" }],
    external_links: [
      { title: "Digital decade dashboard", url: "https://digital.example.eu" },
    ],
    documents: [
      {
        title: "Study on broadband rollout",
        kind: "study",
        url: "https://council.example.org/broadband.pdf",
      },
    ],
    related_sub_areas: [
      { id: "education", name: "Education" },
      { id: "tertiary_education", name: "Tertiary Education" },
    ],
  };
}

export const SUBAREA_LEADERS = subAreaPayload("InnovationLeaders", {
  ict: 75.0,
  egov: 77.8,
  broadband: 75.0,
});

export const SUBAREA_TOP3 = subAreaPayload("Top3", {
  ict: 72.6,
  egov: 76.9,
  broadband: 102.3,
});

export const ICT_TIMESERIES: SingleTimeseries = {
  indicator_id: "ict_specialists",
  name: "ICT specialists share",
  unit: "% employed",
  kind: "single",
  target_region: "AT",
  series: {
    target: [
      [2017, 4.4],
      [2018, 4.5],
      [2019, 4.6],
    ],
    innovation_leaders: [
      [2017, 5.9],
      [2018, 6.0],
      [2019, 6.1],
    ],
    top3: [
      [2017, 6.1],
      [2018, 6.2],
      [2019, 6.3],
    ],
    eu_average: [
      [2017, 4.7],
      [2018, 4.8],
      [2019, 4.9],
    ],
  },
};

export const GII_GOAL: GoalPayload = {
  id: "gii_rank",
  title: "Rank improvement GII from 19 to top 10",
  strategy_id: "rti2030",
  baseline: { year: 2020, value: 19 },
  target: { year: 2030, value: 10 },
  mapped_sub_areas: ["academic_research"],
  status: {
    year: 2023,
    achievement_percent: 11.11,
    current_value: 18,
    rank: 18,
  },
  history: [
    [2019, 19],
    [2020, 19],
    [2021, 18],
    [2022, 18],
    [2023, 18],
  ],
  projection: [
    [2024, 17.9],
    [2030, 15.7],
  ],
  on_track: false,
};
