#include "persim/prompt_texts.hpp"

namespace persim {

const char *const kGenerationSystemText = R"__persim__(You are an AI assistant specialized in detailed and unbiased persona generation for opinion simulations. Your task is to generate a specific, realistic, and diverse persona based on the provided demographic information and fill in a comprehensive JSON template.
)__persim__";

const char *const kObjectiveGenerationTemplate = R"__persim__(### INSTRUCTIONS ###
1. You will be provided with a persona meta file that has the core demographic information of a person.
2. You will also be provided with a final persona template. Your task is to create a detailed, concrete persona that is fully consistent with ALL features in the given metadata by filling the template.
3. Elaborate on all metadata points, providing specific details that flesh out the persona while remaining true to the given information.
4. For all of the features in the metadata, you will be provided with a range of values in the VALUE RANGES AND CATEGORIES section below. Select one of the values for each of the features. DO NOT ADD EXTRA INFORMATION OR ELABORATION TO THE VALUES. DO NOT ADD EXTRA FEATURES TO THE TEMPLATE.
5. IMPORTANT: Place your entire response in the ### PERSONA GENERATION ### section below. Start your response with 'Persona:' and then provide only the persona description. Do not include any other prefixes, headers, or additional text.

### VALUE RANGES AND CATEGORIES ###

ANCESTRY: [
    "British",
    "Irish",
    "German",
    "Italian",
    "Polish",
    "French",
    "Norwegian",
    "Dutch",
    "Swedish",
    "Russian",
    "Chinese",
    "Filipino",
    "Asian Indian",
    "Vietnamese",
    "Korean",
    "Japanese",
    "Mexican",
    "Puerto Rican",
    "Cuban",
    "African American",
    "West Indian",
    "Arab",
    "American Indian"
]

HOUSEHOLD_LANGUAGE: [English, Spanish, Other Indo-European, Asian/Pacific Islander languages, Other]

EDUCATION: [Less than HS, HS Graduate, Some College, Bachelor's, Graduate Degree]

EMPLOYMENT_STATUS: [Employed, Unemployed, Not in Labor Force]

CLASS_OF_WORKER: [Private, Government, Self-employed, Unpaid family worker]

INDUSTRY_CATEGORY: [
    "Management, business, science, and arts occupations",
    "Service occupations",
    "Sales and office occupations", 
    "Natural resources, construction, and maintenance occupations",
    "Production, transportation, and material moving occupations"
]

OCCUPATION_CATEGORY: [
    "Management, business, science, and arts occupations": [
        "Management, business, and financial occupations",
        "Computer, engineering, and science occupations",
        "Education, legal, community service, arts, and media occupations",
        "Healthcare practitioner and technical occupations"
    ],
    "Service occupations": [
        "Healthcare support occupations",
        "Protective service occupations",
        "Food preparation and serving related occupations",
        "Building and grounds cleaning and maintenance occupations",
        "Personal care and service occupations"
    ],
    "Sales and office occupations": [
        "Sales and related occupations",
        "Office and administrative support occupations"
    ],
    "Natural resources, construction, and maintenance occupations": [
        "Farming, fishing, and forestry occupations",
        "Construction and extraction occupations",
        "Installation, maintenance, and repair occupations"
    ],
    "Production, transportation, and material moving occupations": [
        "Production occupations",
        "Transportation occupations",
        "Material moving occupations"
    ]
]

INCOME: [Range $0-$1,000,000 annually]

MARITAL_STATUS: [Never Married, Married, Divorced, Widowed, Separated]

HOUSEHOLD_TYPE: [Family, Non-family]

PLACE_OF_BIRTH: [US State, Foreign Country]

VETERAN_STATUS: [Veteran, Non-veteran]

DISABILITY: [None, Physical, Mental, Both]

HEALTH_INSURANCE: [Private, Public, None]

### RESPONSE FORMAT ###
Persona: [The completed FINAL PERSONA TEMPLATE]

### PERSONA METADATA ###
{METADATA}

### FINAL PERSONA TEMPLATE ###
{TEMPLATE}

### PERSONA GENERATION ###
)__persim__";

const char *const kObjectiveFieldTemplate = R"__persim__("AGE": "",
"SEX": "",
"RACE": "",
"STATE": "",
"ANCESTRY": "",
"HOUSEHOLD_LANGUAGE": "",
"EDUCATION": "",
"EMPLOYMENT_STATUS": "",
"CLASS_OF_WORKER": "",
"INDUSTRY_CATEGORY": "",
"OCCUPATION_CATEGORY": "",
"INCOME": "",
"MARITAL_STATUS": "",
"HOUSEHOLD_TYPE": "",
"FAMILY_PRESENCE_AND_AGE": "",
"PLACE_OF_BIRTH": "",
"CITIZENSHIP": "",
"VETERAN_STATUS": "",
"DISABILITY": "",
"HEALTH_INSURANCE": ""
)__persim__";

const char *const kSubjectiveGenerationTemplate = R"__persim__(### INSTRUCTIONS ###
1. You will be provided with a persona meta file that has the core demographic information of a person.
2. You will also be provided with a final persona template. Your task is to create a detailed, concrete persona that is fully consistent with ALL features in the given metadata by filling the template.
3. Elaborate on all metadata points, providing specific details that flesh out the persona while remaining true to the given information.
4. For some of the features, you will be provided with a range of values in the VALUE RANGES AND CATEGORIES section below. Select one of the values for each of the features. DO NOT ADD EXTRA INFORMATION for those features.
5. For the other features, fill in the values with a reasonable and succinct description. Be as objective as possible.
6. IMPORTANT: Place your entire response in the ### PERSONA GENERATION ### section below. Start your response with 'Persona:' and then provide only the persona description. Do not include any other prefixes, headers, or additional text.

### VALUE RANGES AND CATEGORIES ###

ANCESTRY: [
    "British",
    "Irish",
    "German",
    "Italian",
    "Polish",
    "French",
    "Norwegian",
    "Dutch",
    "Swedish",
    "Russian",
    "Chinese",
    "Filipino",
    "Asian Indian",
    "Vietnamese",
    "Korean",
    "Japanese",
    "Mexican",
    "Puerto Rican",
    "Cuban",
    "African American",
    "West Indian",
    "Arab",
    "American Indian"
]

HOUSEHOLD_LANGUAGE: [English, Spanish, Other Indo-European, Asian/Pacific Islander languages, Other]

EDUCATION: [Less than HS, HS Graduate, Some College, Bachelor's, Graduate Degree]

EMPLOYMENT_STATUS: [Employed, Unemployed, Not in Labor Force]

CLASS_OF_WORKER: [Private, Government, Self-employed, Unpaid family worker]

INDUSTRY_CATEGORY: [
    "Management, business, science, and arts occupations",
    "Service occupations",
    "Sales and office occupations", 
    "Natural resources, construction, and maintenance occupations",
    "Production, transportation, and material moving occupations"
]

OCCUPATION_CATEGORY: [
    "Management, business, science, and arts occupations": [
        "Management, business, and financial occupations",
        "Computer, engineering, and science occupations",
        "Education, legal, community service, arts, and media occupations",
        "Healthcare practitioner and technical occupations"
    ],
    "Service occupations": [
        "Healthcare support occupations",
        "Protective service occupations",
        "Food preparation and serving related occupations",
        "Building and grounds cleaning and maintenance occupations",
        "Personal care and service occupations"
    ],
    "Sales and office occupations": [
        "Sales and related occupations",
        "Office and administrative support occupations"
    ],
    "Natural resources, construction, and maintenance occupations": [
        "Farming, fishing, and forestry occupations",
        "Construction and extraction occupations",
        "Installation, maintenance, and repair occupations"
    ],
    "Production, transportation, and material moving occupations": [
        "Production occupations",
        "Transportation occupations",
        "Material moving occupations"
    ]
]

INCOME: [Range $0-$1,000,000 annually]

MARITAL_STATUS: [Never Married, Married, Divorced, Widowed, Separated]

HOUSEHOLD_TYPE: [Family, Non-family]

PLACE_OF_BIRTH: [US State, Foreign Country]

VETERAN_STATUS: [Veteran, Non-veteran]

DISABILITY: [None, Physical, Mental, Both]

HEALTH_INSURANCE: [Private, Public, None]

IDEOLOGY: [Very Liberal, Liberal, Moderate, Conservative, Very Conservative]

POLITICAL_VIEWS: [Democrat, Republican, Independent, Other]

### RESPONSE FORMAT ###
Persona: [The completed FINAL PERSONA TEMPLATE]

### PERSONA METADATA ###
{METADATA}

### FINAL PERSONA TEMPLATE ###
{TEMPLATE}

### PERSONA GENERATION ###
)__persim__";

const char *const kSubjectiveFieldTemplate = R"__persim__("AGE": "",
"SEX": "",
"RACE": "",
"STATE": "",
"ANCESTRY": "",
"HOUSEHOLD_LANGUAGE": "",
"EDUCATION": "",
"EMPLOYMENT_STATUS": "",
"CLASS_OF_WORKER": "",
"INDUSTRY_CATEGORY": "",
"OCCUPATION_CATEGORY": "",
"DETAILED_JOB_DESCRIPTION": "",
"INCOME": "",
"MARITAL_STATUS": "",
"HOUSEHOLD_TYPE": "",
"FAMILY_PRESENCE_AND_AGE": "",
"PLACE_OF_BIRTH": "",
"CITIZENSHIP": "",
"VETERAN_STATUS": "",
"DISABILITY": "",
"HEALTH_INSURANCE": "",
"BIG_FIVE_SCORES": {
"OPENNESS": "",
"CONSCIENTIOUSNESS": "",
"EXTRAVERSION": "",
"AGREEABLENESS": "",
"NEUROTICISM": ""
},
"DEFINING_QUIRKS": "",
"MANNERISMS": "",
"PERSONAL_TIME": "",
"LIFESTYLE": "",
"IDEOLOGY": "",
"POLITICAL_VIEWS": "",
"RELIGION": "",
"COGNITIVE_DIFFICULTY": "",
"ABILITY_TO_SPEAK_ENGLISH": "",
"VISION_DIFFICULTY": "",
"FERTILITY": "",
"HEARING_DIFFICULTY": ""
)__persim__";

const char *const kDescriptiveGenerationTemplate = R"__persim__(### INSTRUCTIONS ###
1. You will be provided with a persona meta file that has the core demographic information of a person. 
2. Your task is to create a detailed, diverse, and vivid persona that is fully consistent with ALL features in the given metadata.
3. Elaborate on all metadata points, providing specific details that flesh out the persona while remaining true to the given information.
4. For any ranges or categories provided in the metadata, select and specify exact values or details within those ranges/categories.
5. Ensure diversity in perspectives, backgrounds, and personality traits. Provide enough specific details to make the persona feel real and three-dimensional.
6. Maintain diversity by acknowledging various experiences within the demographic group, but commit to specific details for this individual persona.
7. IMPORTANT: Place your entire response in the ### PERSONA GENERATION ### section below. Start your response with 'Persona:' and then provide only the persona description. Do not include any other prefixes, headers, or additional text.

### RESPONSE FORMAT ###
Persona: [A detailed, vivid, and diverse description of a specific individual. Ensure all details are consistent with and elaborate upon the provided metadata.]

### PERSONA METADATA ###
{METADATA}

### PERSONA GENERATION ###

)__persim__";

const char *const kSimulationTemplate = R"__persim__(You are an AI assistant tasked with generating realistic opinions based on a given persona and a specific topic.

### TASK ###
You will simulate a persona answering a multiple-choice opinion question. Select the answer that best matches your persona's viewpoint and interests.

### GUIDELINES ###
1. Be Faithful to the Persona: Ensure your answer is consistent with the persona's data.
2. Focus on Relevant Aspects: Center your reasoning on the relevant factors that would influence the persona's opinion on that topic.
3. Be Objective: Avoid injecting personal bias or overly politically correct views that may not align with the persona's standpoint.

### INSTRUCTIONS ###
- Choose ONE option (A, B, C, or D depending on the number of options) that best fits the persona
- If multiple answers are possible, randomly select based on their probability
- Always pick an option, even in unclear cases - treat it as a forced-choice survey
- Output format: 'Answer: [Letter]' only, no explanation needed

### PERSONA ###
{PERSONA}

### QUESTION ###
{QUESTION}

### YOUR RESPONSE ###
)__persim__";

} // namespace persim
