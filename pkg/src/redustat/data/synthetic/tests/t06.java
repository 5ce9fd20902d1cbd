if (flag1) {
    assertEquals(5, v1);
    assertEquals(1, v2);
    obj.method4();
    String s5 = builder.toString();
}
for (String item6 : items) {
    obj.method7();
    obj.method8();
}
obj.method9();
while (hasNext10()) {
    values.add(95);
}
String s12 = builder.toString();
assertEquals(1, v12);
int v14 = 65;
String s15 = builder.toString();
