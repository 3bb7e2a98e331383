from setuptools import setup, find_packages

setup(
    name="coordsynth",
    version="0.1.0",
    packages=find_packages(exclude=("test", "test.*")),
    install_requires=[
        # Dependencies are in requirements.txt
    ],
    entry_points={
        "console_scripts": [
            "coordsynth=coordsynth.cli:main",
        ],
    },
)
